//! Sharing polynomials, Lagrange interpolation at zero, and interpolation
//! in the exponent.
//!
//! A group secret `s` is the constant term of a degree `t-1` polynomial `f`;
//! participant `i` holds the share `f(x_i)` for a public nonzero point `x_i`.
//! Any `m >= t` distinct points reconstruct `f(0)` through the interpolation
//! coefficients evaluated at zero, and the same combination applied to the
//! public points `f(x_i)·P` yields `f(0)·P` without exposing any share.

use rand::Rng;

use super::{Field, Group, MathError};

/// Degree `t-1` polynomial over the scalar field, constant term first.
///
/// Invariants enforced at construction: at least one coefficient, a nonzero
/// constant term (it is the group secret), and a nonzero leading coefficient
/// so the degree is exactly `t-1`.
#[derive(Clone, PartialEq, Eq)]
pub struct SecretPolynomial<G: Group> {
    coefficients: Vec<G::Scalar>,
}

impl<G: Group> SecretPolynomial<G> {
    pub fn new(coefficients: Vec<G::Scalar>) -> Result<Self, MathError> {
        let Some(last) = coefficients.last() else {
            return Err(MathError::EmptyPolynomial);
        };
        if coefficients.len() > 1 && last.is_zero() {
            return Err(MathError::ZeroLeadingCoefficient);
        }
        if coefficients[0].is_zero() {
            return Err(MathError::ZeroSecret);
        }
        Ok(SecretPolynomial { coefficients })
    }

    /// Uniformly random polynomial for a threshold `t >= 1`, with nonzero
    /// secret and nonzero leading coefficient.
    pub fn random<R: Rng + ?Sized>(threshold: usize, rng: &mut R) -> Self {
        assert!(threshold >= 1, "threshold must be at least 1");
        let mut coefficients = Vec::with_capacity(threshold);
        coefficients.push(G::Scalar::random_nonzero(rng));
        for k in 1..threshold {
            if k == threshold - 1 {
                coefficients.push(G::Scalar::random_nonzero(rng));
            } else {
                coefficients.push(G::Scalar::random(rng));
            }
        }
        SecretPolynomial { coefficients }
    }

    /// The threshold `t` (= number of coefficients = degree + 1).
    pub fn threshold(&self) -> usize {
        self.coefficients.len()
    }

    /// The group secret `s = f(0)`.
    pub fn secret(&self) -> &G::Scalar {
        &self.coefficients[0]
    }

    pub fn coefficients(&self) -> &[G::Scalar] {
        &self.coefficients
    }

    /// Horner evaluation of `f(x)`.
    pub fn evaluate(&self, x: &G::Scalar) -> G::Scalar {
        let mut acc = G::Scalar::zero();
        for coeff in self.coefficients.iter().rev() {
            acc = acc.mul(x).add(coeff);
        }
        acc
    }
}

impl<G: Group> std::fmt::Debug for SecretPolynomial<G> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SecretPolynomial")
            .field("threshold", &self.coefficients.len())
            .field("coefficients", &"<redacted>")
            .finish()
    }
}

fn check_points<F: Field>(points: &[F]) -> Result<(), MathError> {
    for (i, x) in points.iter().enumerate() {
        if x.is_zero() {
            return Err(MathError::ZeroEvaluationPoint);
        }
        if points[..i].contains(x) {
            return Err(MathError::DuplicateEvaluationPoint);
        }
    }
    Ok(())
}

/// Lagrange basis coefficient at zero for position `i` within `points`:
/// `prod_{r != i} (-x_r) / (x_i - x_r)`.
pub fn lagrange_coefficient<F: Field>(points: &[F], i: usize) -> Result<F, MathError> {
    check_points(points)?;
    if i >= points.len() {
        return Err(MathError::IndexOutOfBounds {
            index: i,
            len: points.len(),
        });
    }
    let mut acc = F::one();
    for (r, x_r) in points.iter().enumerate() {
        if r == i {
            continue;
        }
        let denom = points[i].sub(x_r);
        // distinctness was checked, so the denominator is invertible
        let inv = denom.invert().ok_or(MathError::DuplicateEvaluationPoint)?;
        acc = acc.mul(&x_r.neg()).mul(&inv);
    }
    Ok(acc)
}

/// All Lagrange-at-zero coefficients for `points`, validated once.
pub fn lagrange_coefficients<F: Field>(points: &[F]) -> Result<Vec<F>, MathError> {
    check_points(points)?;
    (0..points.len())
        .map(|i| lagrange_coefficient(points, i))
        .collect()
}

/// Reconstruct `f(0)` from plain shares `(x_i, f(x_i))`.
pub fn interpolate_at_zero<F: Field>(shares: &[(F, F)]) -> Result<F, MathError> {
    let points: Vec<F> = shares.iter().map(|(x, _)| x.clone()).collect();
    let coefficients = lagrange_coefficients(&points)?;
    let mut acc = F::zero();
    for (lambda, (_, y)) in coefficients.iter().zip(shares) {
        acc = acc.add(&lambda.mul(y));
    }
    Ok(acc)
}

/// Reconstruct `f(0)·P` from exponent shares `(x_i, f(x_i)·P)`.
///
/// For `m >= t` valid shares of a degree `t-1` polynomial the result is the
/// group commitment `Q = s·P`; corrupt or insufficient shares land elsewhere.
pub fn interpolate_in_exponent<G: Group>(
    shares: &[(G::Scalar, G::Point)],
) -> Result<G::Point, MathError> {
    let points: Vec<G::Scalar> = shares.iter().map(|(x, _)| x.clone()).collect();
    let coefficients = lagrange_coefficients(&points)?;
    let mut acc = G::identity();
    for (lambda, (_, point)) in coefficients.iter().zip(shares) {
        acc = G::add(&acc, &G::mul(point, lambda));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::toy::{ToyGroup, ToyScalar};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    type S = ToyScalar;

    fn s(v: u64) -> S {
        S::from_u64(v)
    }

    /// Independent oracle: evaluate by summing powers term by term.
    fn brute_force_eval(coeffs: &[S], x: &S) -> S {
        let mut acc = S::zero();
        let mut power = S::one();
        for c in coeffs {
            acc = acc.add(&c.mul(&power));
            power = power.mul(x);
        }
        acc
    }

    fn distinct_nonzero_points(count: usize, rng: &mut ChaCha20Rng) -> Vec<S> {
        let mut points = Vec::with_capacity(count);
        while points.len() < count {
            let x = S::random_nonzero(rng);
            if !points.contains(&x) {
                points.push(x);
            }
        }
        points
    }

    #[test]
    fn constant_polynomial_evaluates_to_its_constant() {
        let poly = SecretPolynomial::<ToyGroup>::new(vec![s(5)]).unwrap();
        assert_eq!(poly.evaluate(&s(17)), s(5));
    }

    #[test]
    fn small_polynomial_matches_direct_arithmetic() {
        // f(x) = 2 + 3x, f(4) = 14; no modular wraparound involved
        let poly = SecretPolynomial::<ToyGroup>::new(vec![s(2), s(3)]).unwrap();
        assert_eq!(poly.evaluate(&s(4)), s(14));
        assert_eq!(brute_force_eval(poly.coefficients(), &s(4)), s(14));
    }

    #[test]
    fn evaluation_at_zero_is_the_constant_term() {
        let mut rng = ChaCha20Rng::seed_from_u64(21);
        for t in 1..=6 {
            let poly = SecretPolynomial::<ToyGroup>::random(t, &mut rng);
            assert_eq!(poly.evaluate(&S::zero()), *poly.secret());
        }
    }

    #[test]
    fn horner_agrees_with_brute_force_oracle() {
        let mut rng = ChaCha20Rng::seed_from_u64(22);
        for _ in 0..100 {
            let t = rng.gen_range(1..=6);
            let poly = SecretPolynomial::<ToyGroup>::random(t, &mut rng);
            let x = S::random(&mut rng);
            assert_eq!(poly.evaluate(&x), brute_force_eval(poly.coefficients(), &x));
        }
    }

    #[test]
    fn polynomial_construction_enforces_invariants() {
        assert_eq!(
            SecretPolynomial::<ToyGroup>::new(vec![]).unwrap_err(),
            MathError::EmptyPolynomial
        );
        assert_eq!(
            SecretPolynomial::<ToyGroup>::new(vec![s(1), S::zero()]).unwrap_err(),
            MathError::ZeroLeadingCoefficient
        );
        assert_eq!(
            SecretPolynomial::<ToyGroup>::new(vec![S::zero(), s(3)]).unwrap_err(),
            MathError::ZeroSecret
        );
    }

    #[test]
    fn single_point_coefficient_is_one() {
        let points = vec![s(41)];
        assert_eq!(lagrange_coefficient(&points, 0).unwrap(), S::one());
    }

    #[test]
    fn two_point_coefficients_interpolate_a_line_at_zero() {
        // through x = 1, 2: lambda_0 = 2, lambda_1 = -1
        let points = vec![s(1), s(2)];
        assert_eq!(lagrange_coefficient(&points, 0).unwrap(), s(2));
        assert_eq!(
            lagrange_coefficient(&points, 1).unwrap(),
            S::zero().sub(&S::one())
        );

        // 2 f(1) - f(2) = f(0) for any degree-1 polynomial
        let mut rng = ChaCha20Rng::seed_from_u64(23);
        for _ in 0..50 {
            let poly = SecretPolynomial::<ToyGroup>::random(2, &mut rng);
            let lhs = s(2).mul(&poly.evaluate(&s(1))).sub(&poly.evaluate(&s(2)));
            assert_eq!(lhs, *poly.secret());
        }
    }

    #[test]
    fn coefficient_errors_on_bad_points() {
        assert_eq!(
            lagrange_coefficient(&[s(1), s(1)], 0).unwrap_err(),
            MathError::DuplicateEvaluationPoint
        );
        assert_eq!(
            lagrange_coefficient(&[s(1), S::zero()], 0).unwrap_err(),
            MathError::ZeroEvaluationPoint
        );
        assert_eq!(
            lagrange_coefficient(&[s(1), s(2)], 2).unwrap_err(),
            MathError::IndexOutOfBounds { index: 2, len: 2 }
        );
    }

    #[test]
    fn interpolation_recovers_the_secret_for_m_at_least_t() {
        let mut rng = ChaCha20Rng::seed_from_u64(24);
        for t in 1..=6usize {
            for extra in 0..=4usize {
                for _ in 0..100 {
                    let poly = SecretPolynomial::<ToyGroup>::random(t, &mut rng);
                    let points = distinct_nonzero_points(t + extra, &mut rng);
                    let shares: Vec<(S, S)> =
                        points.iter().map(|x| (*x, poly.evaluate(x))).collect();
                    assert_eq!(interpolate_at_zero(&shares).unwrap(), *poly.secret());
                }
            }
        }
    }

    #[test]
    fn exponent_interpolation_matches_scalar_oracle() {
        let mut rng = ChaCha20Rng::seed_from_u64(25);
        for t in 1..=6usize {
            for extra in 0..=4usize {
                for _ in 0..100 {
                    let poly = SecretPolynomial::<ToyGroup>::random(t, &mut rng);
                    let points = distinct_nonzero_points(t + extra, &mut rng);
                    let shares: Vec<(S, <ToyGroup as Group>::Point)> = points
                        .iter()
                        .map(|x| (*x, ToyGroup::mul_generator(&poly.evaluate(x))))
                        .collect();
                    let expected = ToyGroup::mul_generator(poly.secret());
                    assert_eq!(
                        interpolate_in_exponent::<ToyGroup>(&shares).unwrap(),
                        expected
                    );
                }
            }
        }
    }

    #[test]
    fn single_share_with_threshold_one_recovers_commitment() {
        let mut rng = ChaCha20Rng::seed_from_u64(26);
        let poly = SecretPolynomial::<ToyGroup>::random(1, &mut rng);
        let x = S::random_nonzero(&mut rng);
        let share = (x, ToyGroup::mul_generator(&poly.evaluate(&x)));
        assert_eq!(
            interpolate_in_exponent::<ToyGroup>(&[share]).unwrap(),
            ToyGroup::mul_generator(poly.secret())
        );
    }

    #[test]
    fn corrupted_share_moves_the_result_off_the_commitment() {
        let mut rng = ChaCha20Rng::seed_from_u64(27);
        for _ in 0..200 {
            let poly = SecretPolynomial::<ToyGroup>::random(3, &mut rng);
            let points = distinct_nonzero_points(3, &mut rng);
            let mut shares: Vec<(S, <ToyGroup as Group>::Point)> = points
                .iter()
                .map(|x| (*x, ToyGroup::mul_generator(&poly.evaluate(x))))
                .collect();
            // shift one point by a nonzero multiple of the generator
            let delta = S::random_nonzero(&mut rng);
            let idx = rng.gen_range(0..shares.len());
            shares[idx].1 = ToyGroup::add(&shares[idx].1, &ToyGroup::mul_generator(&delta));
            let q = ToyGroup::mul_generator(poly.secret());
            assert_ne!(interpolate_in_exponent::<ToyGroup>(&shares).unwrap(), q);
        }
    }

    #[test]
    fn too_few_shares_never_hit_the_commitment() {
        // with m = t-1 the interpolation error is c_{t-1} * prod(x_i), which is
        // nonzero by construction, so equality is impossible rather than rare
        let mut rng = ChaCha20Rng::seed_from_u64(28);
        for _ in 0..1000 {
            let poly = SecretPolynomial::<ToyGroup>::random(3, &mut rng);
            let points = distinct_nonzero_points(2, &mut rng);
            let shares: Vec<(S, <ToyGroup as Group>::Point)> = points
                .iter()
                .map(|x| (*x, ToyGroup::mul_generator(&poly.evaluate(x))))
                .collect();
            let q = ToyGroup::mul_generator(poly.secret());
            assert_ne!(interpolate_in_exponent::<ToyGroup>(&shares).unwrap(), q);
        }
    }

    #[test]
    fn exponent_interpolation_is_permutation_invariant() {
        let mut rng = ChaCha20Rng::seed_from_u64(29);
        let poly = SecretPolynomial::<ToyGroup>::random(4, &mut rng);
        let points = distinct_nonzero_points(6, &mut rng);
        let mut shares: Vec<(S, <ToyGroup as Group>::Point)> = points
            .iter()
            .map(|x| (*x, ToyGroup::mul_generator(&poly.evaluate(x))))
            .collect();
        let reference = interpolate_in_exponent::<ToyGroup>(&shares).unwrap();
        for _ in 0..10 {
            shares.shuffle(&mut rng);
            assert_eq!(
                interpolate_in_exponent::<ToyGroup>(&shares).unwrap(),
                reference
            );
        }
    }

    #[test]
    fn debug_output_redacts_coefficients() {
        let poly = SecretPolynomial::<ToyGroup>::new(vec![s(12345), s(999)]).unwrap();
        let printed = format!("{poly:?}");
        assert!(printed.contains("redacted"));
        assert!(!printed.contains("12345"));
    }
}
