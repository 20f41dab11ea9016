//! Kronecker/tensor-product permanent inequalities: the per-tensor
//! conjecture and its proven relatives, plus the Pate block bound and the
//! Hadamard-Kronecker comparison.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::perm::factorial;
use crate::permanent::permanent;
use crate::scalar::{Rational, Scalar, SignDecision};

use super::report::{CheckerName, ConjectureReport, InputSummary};
use super::require_psd;

/// All tensor-product reports for a PSD pair `A` (n x n), `B` (m x m),
/// sharing one exact evaluation of `per(A (x) B)`:
///
/// * Brualdi (only when both are entrywise nonnegative, where it is a
///   theorem): `(per A)^m (per B)^n <= per(A (x) B)`;
/// * the per-tensor conjecture: the same bound assuming only PSD;
/// * Ando: coefficient `max((n!)^-m, (m!)^-n)` on the left;
/// * Marcus: coefficient `(n!)^-m (m!)^-n`;
/// * Pate `k = 2` on `B` (when `2m <= 12`):
///   `2^m (per B)^2 <= per(J_2 (x) B)`;
/// * Hadamard-Kronecker (only when `n = m`):
///   `(per(A o B))^n <= per(A (x) B)`.
pub fn tensor_suite<T: Scalar>(
    a: &SquareMatrix<T>,
    b: &SquareMatrix<T>,
) -> Result<Vec<ConjectureReport>> {
    let n = a.size();
    let m = b.size();
    if n == 0 || m == 0 {
        return Err(Error::DimensionMismatch("empty factor".to_string()));
    }
    if n * m > 12 {
        return Err(Error::SizeGuard(format!(
            "per(A (x) B) needs nm <= 12, got {}",
            n * m
        )));
    }
    require_psd(a)?;
    require_psd(b)?;

    let inputs = InputSummary::of_matrices(&[a.clone(), b.clone()]);
    let per_a = permanent(a)?.value;
    let per_b = permanent(b)?.value;
    let per_tensor = permanent(&a.kronecker(b))?.value;
    let base = scalar_pow(&per_a, m).mul(&scalar_pow(&per_b, n));

    let mut out = Vec::with_capacity(6);
    if entrywise_nonnegative(a) && entrywise_nonnegative(b) {
        out.push(
            ConjectureReport::inequality(
                CheckerName::Brualdi,
                inputs.clone(),
                &base,
                &per_tensor,
            )
            .with_witness("both factors entrywise nonnegative".to_string()),
        );
    }
    out.push(ConjectureReport::inequality(
        CheckerName::PerTensor,
        inputs.clone(),
        &base,
        &per_tensor,
    ));

    let ando_coeff = inverse_factorial_power(n, m).max(inverse_factorial_power(m, n));
    out.push(ConjectureReport::inequality(
        CheckerName::Ando,
        inputs.clone(),
        &T::from_rational(&ando_coeff).mul(&base),
        &per_tensor,
    ));
    let marcus_coeff = inverse_factorial_power(n, m) * inverse_factorial_power(m, n);
    out.push(ConjectureReport::inequality(
        CheckerName::MarcusTensor,
        inputs.clone(),
        &T::from_rational(&marcus_coeff).mul(&base),
        &per_tensor,
    ));

    if 2 * m <= 12 {
        let doubled = SquareMatrix::<T>::all_ones(2).kronecker(b);
        let lhs = T::from_rational(&Rational::new(
            BigInt::from(2u32).pow(m as u32),
            BigInt::from(1),
        ))
        .mul(&per_b.mul(&per_b));
        out.push(
            ConjectureReport::inequality(
                CheckerName::Pate,
                InputSummary::of_matrix(b),
                &lhs,
                &permanent(&doubled)?.value,
            )
            .with_witness("k = 2".to_string()),
        );
    }

    if n == m {
        let per_had = permanent(&a.hadamard(b)?)?.value;
        out.push(ConjectureReport::inequality(
            CheckerName::HadamardKronecker,
            inputs,
            &scalar_pow(&per_had, n),
            &per_tensor,
        ));
    }
    Ok(out)
}

fn scalar_pow<T: Scalar>(x: &T, e: usize) -> T {
    let mut acc = T::one();
    for _ in 0..e {
        acc = acc.mul(x);
    }
    acc
}

/// `(k!)^-e` as an exact rational.
fn inverse_factorial_power(k: usize, e: usize) -> Rational {
    Rational::new(
        BigInt::from(1),
        BigInt::from(factorial(k)).pow(e as u32),
    )
}

fn entrywise_nonnegative<T: Scalar>(m: &SquareMatrix<T>) -> bool {
    (0..m.size()).all(|i| {
        (0..m.size()).all(|j| {
            let e = m.at(i, j);
            e.is_real()
                && matches!(
                    e.sign_real(),
                    SignDecision::Positive | SignDecision::Zero
                )
        })
    })
}
