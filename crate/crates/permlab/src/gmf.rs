//! Characters of permutation groups and the generalized matrix function
//!
//!   d^H_chi(A) = sum over sigma in H of chi(sigma) * prod_t a_{t, sigma(t)},
//!
//! which specializes to the determinant (sign character), the permanent
//! (trivial character), the diagonal product (trivial group), and the
//! immanants (irreducible characters of S_n).

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::perm::{Partition, PermGroup, Permutation};
use crate::scalar::{cyclo_make, CyclotomicNumber, Rational, Scalar};

/// A character: one explicit (complex, stored cyclotomic) value per group
/// element, constant on conjugacy classes, positive integer degree at the
/// identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    group: PermGroup,
    values: Vec<CyclotomicNumber>,
    degree: Rational,
}

impl Character {
    pub fn new(group: PermGroup, values: Vec<CyclotomicNumber>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::InvalidCharacter(format!(
                "{} values for a group of order {}",
                values.len(),
                group.order()
            )));
        }
        for class in group.conjugacy_classes() {
            let v0 = &values[class[0]];
            if let Some(&i) = class.iter().find(|&&i| values[i] != *v0) {
                return Err(Error::InvalidCharacter(format!(
                    "not constant on the conjugacy class of {}: differs at {}",
                    group.element(class[0]),
                    group.element(i)
                )));
            }
        }
        let at_e = &values[group.identity_index()];
        let degree = match at_e.to_rational() {
            Some(d) if d >= Rational::one() => d,
            _ => {
                return Err(Error::InvalidCharacter(format!(
                    "degree {at_e} is not a rational >= 1"
                )))
            }
        };
        Ok(Character {
            group,
            values,
            degree,
        })
    }

    /// chi == 1.
    pub fn trivial(group: PermGroup) -> Self {
        let values = vec![CyclotomicNumber::from_rational_value(&Rational::one()); group.order()];
        Character::new(group, values).expect("constant functions are characters")
    }

    /// The restriction of the sign of a permutation.
    pub fn sign(group: PermGroup) -> Self {
        let values = group
            .elements()
            .iter()
            .map(|p| CyclotomicNumber::from_rational_value(&crate::scalar::rat_int(p.sign())))
            .collect();
        Character::new(group, values).expect("sign is a character")
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn value(&self, index: usize) -> &CyclotomicNumber {
        &self.values[index]
    }

    pub fn value_of(&self, p: &Permutation) -> Option<&CyclotomicNumber> {
        self.group.index_of(p).map(|i| &self.values[i])
    }

    /// chi(e).
    pub fn degree(&self) -> &Rational {
        &self.degree
    }

    pub fn is_defined_on(&self, h: &PermGroup) -> bool {
        self.group == *h
    }
}

/// Character value of the irreducible S_n character labelled by `lambda` on
/// the class with the given cycle type, by the Murnaghan-Nakayama border-strip
/// recursion (run on first-column hook lengths, where removing a strip of
/// size k is replacing one hook length b by b - k).
pub fn symmetric_character_value(lambda: &Partition, cycle_type: &[usize]) -> Result<i64> {
    let weight: usize = cycle_type.iter().sum();
    if weight != lambda.n() {
        return Err(Error::DimensionMismatch(format!(
            "cycle type {cycle_type:?} has weight {weight}, partition has {}",
            lambda.n()
        )));
    }
    let mut memo = HashMap::new();
    Ok(mn_rec(lambda.parts(), cycle_type, &mut memo))
}

fn mn_rec(
    lambda: &[usize],
    mu: &[usize],
    memo: &mut HashMap<(Vec<usize>, Vec<usize>), i64>,
) -> i64 {
    if mu.is_empty() {
        return 1;
    }
    let key = (lambda.to_vec(), mu.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let k = mu[0] as i64;
    let m = lambda.len();
    let beta: Vec<i64> = lambda
        .iter()
        .enumerate()
        .map(|(i, &l)| l as i64 + (m - 1 - i) as i64)
        .collect();
    let mut total = 0i64;
    for i in 0..m {
        let t = beta[i] - k;
        if t < 0 || beta.contains(&t) {
            continue;
        }
        let height = beta.iter().filter(|&&b| t < b && b < beta[i]).count();
        let mut nb = beta.clone();
        nb[i] = t;
        nb.sort_unstable_by(|a, b| b.cmp(a));
        let mut nl: Vec<usize> = nb
            .iter()
            .enumerate()
            .map(|(j, &b)| (b - (m - 1 - j) as i64) as usize)
            .collect();
        while nl.last() == Some(&0) {
            nl.pop();
        }
        let term = mn_rec(&nl, &mu[1..], memo);
        total += if height % 2 == 1 { -term } else { term };
    }
    memo.insert(key, total);
    total
}

/// The irreducible character of S_n labelled by `lambda`, as an explicit
/// table over the lexicographic enumeration of S_n.
pub fn irreducible_character(lambda: &Partition) -> Result<Character> {
    let n = lambda.n();
    let group = PermGroup::symmetric(n)?;
    let mut by_type: HashMap<Vec<usize>, CyclotomicNumber> = HashMap::new();
    let mut values = Vec::with_capacity(group.order());
    for p in group.elements() {
        let t = p.cycle_type();
        let v = match by_type.get(&t) {
            Some(v) => v.clone(),
            None => {
                let v = CyclotomicNumber::from_rational_value(&crate::scalar::rat_int(
                    symmetric_character_value(lambda, &t)?,
                ));
                by_type.insert(t, v.clone());
                v
            }
        };
        values.push(v);
    }
    // values depend only on the cycle type, which is the full conjugacy
    // invariant of S_n, so the class-constancy check in `new` cannot fail;
    // it is still run for n small enough that it is cheap.
    if group.order() <= 720 {
        Character::new(group, values)
    } else {
        let degree = values[group.identity_index()]
            .to_rational()
            .expect("identity value is an integer");
        Ok(Character {
            group,
            values,
            degree,
        })
    }
}

/// All degree-1 characters of `h` (the characters of its abelianization).
/// Found by assigning each generator in a short generating chain a root of
/// unity of compatible order and keeping exactly the assignments that extend
/// to homomorphisms.
pub fn linear_characters(h: &PermGroup) -> Result<Vec<Character>> {
    let gens = h.generating_chain();
    let order = h.order();
    // spanning tree: reach every element from the identity by right
    // multiplication, remembering which generator was used
    let e = h.identity_index();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; order];
    let mut bfs = vec![e];
    let mut seen = vec![false; order];
    seen[e] = true;
    let mut head = 0;
    while head < bfs.len() {
        let x = bfs[head];
        head += 1;
        for (k, g) in gens.iter().enumerate() {
            let y = h
                .index_of(&h.element(x).compose(g))
                .expect("group is closed");
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some((x, k));
                bfs.push(y);
            }
        }
    }
    let orders: Vec<usize> = gens.iter().map(|g| g.order()).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let assigned: Vec<CyclotomicNumber> = choice
            .iter()
            .zip(&orders)
            .map(|(&j, &d)| cyclo_make(d as u32, j as u32))
            .collect();
        // propagate along the spanning tree, then verify every edge
        let mut values: Vec<CyclotomicNumber> = vec![CyclotomicNumber::one(); order];
        for &x in &bfs {
            if let Some((px, k)) = parent[x] {
                values[x] = values[px].mul(&assigned[k]);
            }
        }
        let consistent = (0..order).all(|x| {
            gens.iter().enumerate().all(|(k, g)| {
                let y = h
                    .index_of(&h.element(x).compose(g))
                    .expect("group is closed");
                values[y] == values[x].mul(&assigned[k])
            })
        });
        if consistent {
            out.push(Character::new(h.clone(), values)?);
        }
        // odometer over the candidate roots
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return Ok(out);
            }
            choice[pos] += 1;
            if choice[pos] < orders[pos] {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// d^H_chi(A): the chi-weighted sum of diagonal products over H. Terms are
/// accumulated in the group's fixed element order.
pub fn gmf<T: Scalar>(a: &SquareMatrix<T>, h: &PermGroup, chi: &Character) -> Result<T> {
    if a.size() != h.degree() {
        return Err(Error::DimensionMismatch(format!(
            "matrix size {} vs group degree {}",
            a.size(),
            h.degree()
        )));
    }
    if !chi.is_defined_on(h) {
        return Err(Error::InvalidCharacter(
            "character is defined on a different group".to_string(),
        ));
    }
    let n = a.size();
    let mut acc = T::zero();
    for (idx, sigma) in h.elements().iter().enumerate() {
        let mut prod = T::from_cyclotomic(chi.value(idx))?;
        for t in 0..n {
            if T::EXACT && prod.is_zero() {
                break;
            }
            prod = prod.mul(a.at(t, sigma.apply(t)));
        }
        acc = acc.add(&prod);
    }
    Ok(acc)
}

/// d^H_chi(A) / chi(e).
pub fn normalized_gmf<T: Scalar>(
    a: &SquareMatrix<T>,
    h: &PermGroup,
    chi: &Character,
) -> Result<T> {
    gmf(a, h, chi)?.div(&T::from_rational(chi.degree()))
}

/// The immanant d_lambda(A) = d^{S_n}_{chi_lambda}(A).
pub fn immanant<T: Scalar>(a: &SquareMatrix<T>, lambda: &Partition) -> Result<T> {
    if a.size() != lambda.n() {
        return Err(Error::DimensionMismatch(format!(
            "matrix size {} vs partition weight {}",
            a.size(),
            lambda.n()
        )));
    }
    let chi = irreducible_character(lambda)?;
    let group = chi.group().clone();
    gmf(a, &group, &chi)
}

/// The Hadamard matrix function: the diagonal product, which is
/// `gmf(A, {e}, 1)` without building the trivial group.
pub fn diagonal_product<T: Scalar>(a: &SquareMatrix<T>) -> T {
    let mut prod = T::one();
    for i in 0..a.size() {
        prod = prod.mul(a.at(i, i));
    }
    prod
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    use super::*;
    use crate::matrix::factor::det_bareiss;
    use crate::matrix::gram_from_rows;
    use crate::perm::factorial;
    use crate::permanent::per_ryser;
    use crate::scalar::{rat_int, GaussianRational, SignDecision};

    fn random_gaussian_rows(rng: &mut ChaCha20Rng, rows: usize, n: usize) -> Vec<Vec<GaussianRational>> {
        (0..rows)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        GaussianRational::from_ints(
                            rng.random_range(-3..=3),
                            rng.random_range(-3..=3),
                        )
                    })
                    .collect()
            })
            .collect()
    }

    fn random_psd(rng: &mut ChaCha20Rng, n: usize) -> SquareMatrix<GaussianRational> {
        gram_from_rows(&random_gaussian_rows(rng, n, n)).unwrap()
    }

    #[test]
    fn s3_character_table() {
        // classes by cycle type: (1,1,1) = e, (2,1) = transpositions, (3) = 3-cycles
        let table = [
            ("3", [1i64, 1, 1]),
            ("2,1", [2, 0, -1]),
            ("1,1,1", [1, -1, 1]),
        ];
        for (lam, expect) in table {
            let lambda = Partition::parse(lam).unwrap();
            assert_eq!(
                symmetric_character_value(&lambda, &[1, 1, 1]).unwrap(),
                expect[0]
            );
            assert_eq!(
                symmetric_character_value(&lambda, &[2, 1]).unwrap(),
                expect[1]
            );
            assert_eq!(
                symmetric_character_value(&lambda, &[3]).unwrap(),
                expect[2]
            );
        }
    }

    #[test]
    fn degrees_match_hook_counts() {
        for n in 1..=6 {
            let id_type: Vec<usize> = vec![1; n];
            for lambda in Partition::all(n) {
                assert_eq!(
                    symmetric_character_value(&lambda, &id_type).unwrap(),
                    lambda.syt_count() as i64,
                    "degree of {lambda}"
                );
            }
        }
    }

    #[test]
    fn character_construction_validates() {
        let s3 = PermGroup::symmetric(3).unwrap();
        // sign and trivial pass
        let sign = Character::sign(s3.clone());
        assert_eq!(*sign.degree(), rat_int(1));
        let chi21 = irreducible_character(&Partition::parse("2,1").unwrap()).unwrap();
        assert_eq!(*chi21.degree(), rat_int(2));
        // a non class function is rejected: +1 on one transposition only
        let mut values: Vec<CyclotomicNumber> = (0..6)
            .map(|_| CyclotomicNumber::one())
            .collect();
        values[1] = CyclotomicNumber::from_rational_value(&rat_int(-1));
        assert!(matches!(
            Character::new(s3, values),
            Err(Error::InvalidCharacter(_))
        ));
    }

    #[test]
    fn gmf_specializations() {
        let mut rng = ChaCha20Rng::seed_from_u64(41);
        for n in 2..=4 {
            let rows = random_gaussian_rows(&mut rng, n, n);
            let a = SquareMatrix::from_rows(rows).unwrap();
            let sn = PermGroup::symmetric(n).unwrap();
            let det = gmf(&a, &sn, &Character::sign(sn.clone())).unwrap();
            assert_eq!(det, det_bareiss(&a).unwrap());
            let per = gmf(&a, &sn, &Character::trivial(sn.clone())).unwrap();
            assert_eq!(per, per_ryser(&a).unwrap().value);
            let triv = PermGroup::trivial(n);
            let diag = gmf(&a, &triv, &Character::trivial(triv.clone())).unwrap();
            assert_eq!(diag, diagonal_product(&a));
        }
    }

    #[test]
    fn immanant_examples() {
        let j3 = SquareMatrix::<Rational>::all_ones(3);
        assert_eq!(
            immanant(&j3, &Partition::parse("2,1").unwrap()).unwrap(),
            rat_int(0)
        );
        let mut rng = ChaCha20Rng::seed_from_u64(43);
        let a = SquareMatrix::from_rows(random_gaussian_rows(&mut rng, 4, 4)).unwrap();
        assert_eq!(
            immanant(&a, &Partition::parse("1,1,1,1").unwrap()).unwrap(),
            det_bareiss(&a).unwrap()
        );
        assert_eq!(
            immanant(&a, &Partition::parse("4").unwrap()).unwrap(),
            per_ryser(&a).unwrap().value
        );
    }

    #[test]
    fn normalized_gmf_on_identity() {
        for n in 2..=4 {
            let id = SquareMatrix::<Rational>::identity(n);
            for lambda in Partition::all(n) {
                let chi = irreducible_character(&lambda).unwrap();
                let g = chi.group().clone();
                assert_eq!(normalized_gmf(&id, &g, &chi).unwrap(), rat_int(1));
            }
        }
    }

    #[test]
    fn linear_character_counts() {
        let s4 = PermGroup::symmetric(4).unwrap();
        assert_eq!(linear_characters(&s4).unwrap().len(), 2);
        let s3 = PermGroup::symmetric(3).unwrap();
        assert_eq!(linear_characters(&s3).unwrap().len(), 2);
        let c4 = PermGroup::from_generators(
            4,
            vec![Permutation::parse_cycles(4, "(1 2 3 4)").unwrap()],
        )
        .unwrap();
        assert_eq!(linear_characters(&c4).unwrap().len(), 4);
        let k4 = PermGroup::from_generators(
            4,
            vec![
                Permutation::parse_cycles(4, "(1 2)(3 4)").unwrap(),
                Permutation::parse_cycles(4, "(1 3)(2 4)").unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(linear_characters(&k4).unwrap().len(), 4);
        let a4 = PermGroup::from_generators(
            4,
            vec![
                Permutation::parse_cycles(4, "(1 2 3)").unwrap(),
                Permutation::parse_cycles(4, "(1 2)(3 4)").unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(a4.order(), 12);
        assert_eq!(linear_characters(&a4).unwrap().len(), 3);
        // every one is multiplicative
        for chi in linear_characters(&a4).unwrap() {
            for x in a4.elements() {
                for y in a4.elements() {
                    let xy = x.compose(y);
                    assert_eq!(
                        *chi.value_of(&xy).unwrap(),
                        chi.value_of(x).unwrap().mul(chi.value_of(y).unwrap())
                    );
                }
            }
        }
    }

    #[test]
    fn schur_inequality_subgroups_of_s4() {
        // cube roots of unity appear among the characters, so work in the
        // cyclotomic field
        let mut rng = ChaCha20Rng::seed_from_u64(47);
        let s4 = PermGroup::symmetric(4).unwrap();
        let subs = s4.all_subgroups().unwrap();
        for _ in 0..4 {
            let ag = random_psd(&mut rng, 4);
            let a = SquareMatrix::from_fn(4, |i, j| CyclotomicNumber::from_gaussian(ag.at(i, j)));
            let det = det_bareiss(&a).unwrap();
            for h in &subs {
                for chi in linear_characters(h).unwrap() {
                    let val = normalized_gmf(&a, h, &chi).unwrap();
                    let margin = val.sub(&det);
                    assert!(
                        matches!(
                            margin.sign_real(),
                            SignDecision::Positive | SignDecision::Zero
                        ),
                        "det !<= d_chi on a subgroup of order {}",
                        h.order(),
                    );
                }
            }
        }
    }

    #[test]
    fn schur_inequality_irreducible_s5() {
        let mut rng = ChaCha20Rng::seed_from_u64(53);
        for _ in 0..3 {
            let a = random_psd(&mut rng, 5);
            let det = det_bareiss(&a).unwrap().to_rational().unwrap();
            for lambda in Partition::all(5) {
                let chi = irreducible_character(&lambda).unwrap();
                let g = chi.group().clone();
                let val = normalized_gmf(&a, &g, &chi)
                    .unwrap()
                    .to_rational()
                    .unwrap();
                assert!(det <= val, "failed for {lambda}");
            }
        }
    }

    #[test]
    fn merris_bound_with_certified_floats() {
        let mut rng = ChaCha20Rng::seed_from_u64(59);
        for n in 2..=5 {
            let a = random_psd(&mut rng, n);
            // compare n-th powers instead of taking n-th roots; every
            // quantity in the chain is >= 0 for PSD input
            let an = {
                let mut m = a.clone();
                for _ in 1..n {
                    m = m.matmul(&a).unwrap();
                }
                m
            };
            let diag_an: Rational = (0..n)
                .map(|i| an.at(i, i).to_rational().unwrap())
                .product();
            for lambda in Partition::all(n) {
                let chi = irreducible_character(&lambda).unwrap();
                let g = chi.group().clone();
                let v = normalized_gmf(&a, &g, &chi)
                    .unwrap()
                    .to_rational()
                    .unwrap();
                let vn: Rational = (0..n).map(|_| v.clone()).product();
                assert!(vn <= diag_an, "gmf^n vs diagonal of A^n for {lambda}");
            }
            // (prod d_i) <= ((1/n) sum d_i)^n by AM-GM, where
            // sum d_i = trace A^n = sum lambda_i^n from the certified spectrum
            let spec = crate::matrix::eigen::eigenvalues_hermitian(&a, 96).unwrap();
            let mean: f64 = spec.values.iter().map(|l| l.powi(n as i32)).sum::<f64>() / n as f64;
            let rhs = mean.powi(n as i32);
            let lhs = diag_an.embed(96).re_f64();
            let slack = spec.bound.max(1e-9) * (1.0 + rhs.abs()) * 64.0;
            assert!(lhs <= rhs + slack, "AM-GM side with certified spectrum");
        }
    }

    #[test]
    fn character_orthogonality() {
        for n in 2..=5 {
            let sn = PermGroup::symmetric(n).unwrap();
            let chars: Vec<Character> = Partition::all(n)
                .iter()
                .map(|l| irreducible_character(l).unwrap())
                .collect();
            for (i, chi) in chars.iter().enumerate() {
                for (j, psi) in chars.iter().enumerate() {
                    let dot = Rational::sum((0..sn.order()).map(|k| {
                        chi.value(k)
                            .mul(&psi.value(k).conj())
                            .to_rational()
                            .unwrap()
                    }));
                    let expect = if i == j {
                        rat_int(factorial(n) as i64)
                    } else {
                        rat_int(0)
                    };
                    assert_eq!(dot, expect);
                }
            }
        }
    }

    #[test]
    fn gmf_is_multilinear_in_rows() {
        let mut rng = ChaCha20Rng::seed_from_u64(61);
        let n = 4;
        let sn = PermGroup::symmetric(n).unwrap();
        let chi = irreducible_character(&Partition::parse("2,2").unwrap()).unwrap();
        let base = random_gaussian_rows(&mut rng, n, n);
        let u: Vec<GaussianRational> = random_gaussian_rows(&mut rng, 1, n).remove(0);
        let c = GaussianRational::from_ints(2, 5);
        let f = |rows: Vec<Vec<GaussianRational>>| {
            gmf(&SquareMatrix::from_rows(rows).unwrap(), &sn, &chi).unwrap()
        };
        for row in 0..n {
            let mut with_u = base.clone();
            with_u[row] = u.clone();
            let mut combined = base.clone();
            combined[row] = (0..n)
                .map(|j| base[row][j].add(&c.mul(&u[j])))
                .collect();
            let lhs = f(combined);
            let rhs = f(base.clone()).add(&c.mul(&f(with_u)));
            assert_eq!(lhs, rhs);
        }
    }
}
