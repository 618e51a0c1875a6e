//! Factorization of univariate polynomials over ℚ.
//!
//! Squarefree parts are factored by the Berlekamp–Zassenhaus scheme:
//! distinct/equal-degree factorization modulo a small prime, multifactor
//! Hensel lifting to a modulus exceeding the Mignotte bound, then recombination
//! of lifted factors by trial division over ℤ.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::RationalPoly;

// ---- arithmetic in F_p[x] (coefficients low first, always reduced) -------

type Fp = Vec<u64>;

fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1);
    (t.rem_euclid(p as i128)) as u64
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn fp_divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), a.clone());
    }
    let inv = inv_mod(*b.last().unwrap(), p);
    let mut r = a.clone();
    let mut q = vec![0u64; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db] * inv % p;
        q[k] = c;
        if c != 0 {
            for (j, &y) in b.iter().enumerate() {
                r[k + j] = (r[k + j] + p - c * y % p) % p;
            }
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

fn fp_monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => {
            let inv = inv_mod(lc, p);
            a.iter().map(|&c| c * inv % p).collect()
        }
    }
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = fp_divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    fp_monic(&a, p)
}

/// `(g, s, t)` with `s·a + t·b = g` monic.
fn fp_xgcd(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (Fp, Fp) = (vec![1], Vec::new());
    let (mut t0, mut t1): (Fp, Fp) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s);
        (t0, t1) = (t1, t);
    }
    let inv = inv_mod(*r0.last().unwrap(), p);
    let sc = |v: &Fp| trim(v.iter().map(|&c| c * inv % p).collect());
    (sc(&r0), sc(&s0), sc(&t0))
}

fn fp_derivative(a: &Fp, p: u64) -> Fp {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| (i as u64 % p) * c % p)
            .collect(),
    )
}

fn fp_powmod(base: &Fp, exp: &BigUint, m: &Fp, p: u64) -> Fp {
    let mut result: Fp = vec![1];
    let base = fp_divrem(base, m, p).1;
    for i in (0..exp.bits()).rev() {
        result = fp_divrem(&fp_mul(&result, &result, p), m, p).1;
        if exp.bit(i) {
            result = fp_divrem(&fp_mul(&result, &base, p), m, p).1;
        }
    }
    result
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn fp_ddf(f: &Fp, p: u64) -> Vec<(Fp, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x: Fp = vec![0, 1];
    let mut h = x.clone();
    let mut d = 1;
    let pb = BigUint::from(p);
    while f.len() > 2 * d {
        h = fp_powmod(&h, &pb, &f, p);
        let g = fp_gcd(&f, &fp_sub(&h, &x, p), p);
        if g.len() > 1 {
            out.push((g.clone(), d));
            f = fp_divrem(&f, &g, p).0;
            h = fp_divrem(&h, &f, p).1;
        }
        d += 1;
    }
    if f.len() > 1 {
        let deg = f.len() - 1;
        out.push((f, deg));
    }
    out
}

/// Cantor–Zassenhaus equal-degree splitting (odd `p`).
fn fp_edf(f: &Fp, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fp> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.clone()];
    }
    let exp = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
    loop {
        let a: Fp = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = fp_sub(&fp_powmod(&a, &exp, f, p), &vec![1], p);
        let g = fp_gcd(f, &b, p);
        if g.len() > 1 && g.len() < f.len() {
            let h = fp_monic(&fp_divrem(f, &g, p).0, p);
            let mut out = fp_edf(&g, d, p, rng);
            out.extend(fp_edf(&h, d, p, rng));
            return out;
        }
    }
}

fn fp_factor_monic(f: &Fp, p: u64) -> Vec<Fp> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ p);
    let mut out = Vec::new();
    for (g, d) in fp_ddf(f, p) {
        out.extend(fp_edf(&g, d, p, &mut rng));
    }
    out.sort();
    out
}

// ---- arithmetic in (ℤ/m)[x] ----------------------------------------------

type Zp = Vec<BigInt>;

fn zp_trim(mut a: Zp) -> Zp {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn zp_reduce(a: &Zp, m: &BigInt) -> Zp {
    zp_trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn zp_mul(a: &Zp, b: &Zp, m: &BigInt) -> Zp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    zp_reduce(&out, m)
}

fn zp_sub(a: &Zp, b: &Zp, m: &BigInt) -> Zp {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    zp_reduce(
        &(0..n)
            .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
            .collect(),
        m,
    )
}

fn zp_add(a: &Zp, b: &Zp, m: &BigInt) -> Zp {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    zp_reduce(
        &(0..n)
            .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
            .collect(),
        m,
    )
}

fn to_fp(a: &Zp, p: u64) -> Fp {
    let pb = BigInt::from(p);
    trim(
        a.iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect(),
    )
}

fn from_fp(a: &Fp) -> Zp {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts `f ≡ g·h (mod p)` (all monic) to `f ≡ G·H (mod p^k)`.
fn hensel_lift_pair(f: &Zp, g: &Fp, h: &Fp, p: u64, k: u32) -> (Zp, Zp) {
    let (one, s, t) = fp_xgcd(g, h, p);
    debug_assert_eq!(one, vec![1]);
    let pb = BigInt::from(p);
    let mut big_g = from_fp(g);
    let mut big_h = from_fp(h);
    let mut q = pb.clone();
    for _ in 1..k {
        let next = &q * &pb;
        let prod = zp_mul(&big_g, &big_h, &next);
        let diff = zp_sub(&zp_reduce(f, &next), &prod, &next);
        // diff is divisible by q
        let e: Fp = trim(
            diff.iter()
                .map(|c| (c / &q).mod_floor(&pb).to_u64().unwrap())
                .collect(),
        );
        let (quo, sigma) = fp_divrem(&fp_mul(&s, &e, p), h, p);
        let tau = fp_divrem(&fp_add(&fp_mul(&t, &e, p), &fp_mul(&quo, g, p), p), g, p).1;
        big_g = zp_add(
            &big_g,
            &from_fp(&tau).iter().map(|c| c * &q).collect(),
            &next,
        );
        big_h = zp_add(
            &big_h,
            &from_fp(&sigma).iter().map(|c| c * &q).collect(),
            &next,
        );
        q = next;
    }
    (big_g, big_h)
}

fn fp_add(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

fn hensel_lift_all(f: &Zp, factors: &[Fp], p: u64, k: u32) -> Vec<Zp> {
    let modulus = BigInt::from(p).pow(k);
    if factors.len() == 1 {
        return vec![zp_reduce(f, &modulus)];
    }
    let g = &factors[0];
    let h = factors[1..]
        .iter()
        .fold(vec![1u64], |acc, x| fp_mul(&acc, x, p));
    let (big_g, big_h) = hensel_lift_pair(f, g, &h, p, k);
    let mut out = vec![big_g];
    out.extend(hensel_lift_all(&big_h, &factors[1..], p, k));
    out
}

// ---- integer polynomial helpers -------------------------------------------

fn int_content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

fn int_primitive(a: &[BigInt]) -> Vec<BigInt> {
    let c = int_content(a);
    let sign = if a.last().unwrap().is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    a.iter().map(|x| x / &c * &sign).collect()
}

/// Exact division over ℤ, `None` when `b ∤ a`.
fn int_div_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let db = b.len() - 1;
    if a.len() < b.len() {
        return None;
    }
    let lc = b.last().unwrap();
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let (c, rem) = r[k + db].div_rem(lc);
        if !rem.is_zero() {
            return None;
        }
        if !c.is_zero() {
            for (j, y) in b.iter().enumerate() {
                r[k + j] -= &c * y;
            }
        }
        q[k] = c;
    }
    r.iter().all(|c| c.is_zero()).then_some(q)
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).filter(|n| (2..).take_while(|d| d * d <= *n).all(|d| n % d != 0))
}

/// Factors a squarefree primitive integer polynomial (positive leading
/// coefficient) into irreducibles over ℤ.
fn zassenhaus(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let lc = f.last().unwrap().clone();
    // pick the prime (among a handful of admissible ones) with fewest modular factors
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut tried = 0;
    for p in small_primes() {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = to_fp(&f.to_vec(), p);
        if fp.len() != f.len() {
            continue;
        }
        let fm = fp_monic(&fp, p);
        if fp_gcd(&fm, &fp_derivative(&fm, p), p).len() != 1 {
            continue;
        }
        let facs = fp_factor_monic(&fm, p);
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 6 || best.as_ref().unwrap().1.len() == 1 {
            break;
        }
    }
    let (p, modular) = best.expect("some prime is admissible");
    if modular.len() == 1 {
        return vec![f.to_vec()];
    }
    // coefficient bound for factors of lc·f: |lc| · 2^n · ‖f‖₂
    let norm2 = f
        .iter()
        .map(|c| c * c)
        .fold(BigInt::zero(), |a, b| a + b)
        .sqrt()
        + 1;
    let bound = (&lc.abs() * &norm2) << (n + 1);
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= bound {
        pk *= &pb;
        k += 1;
    }
    let lc_inv = lc.modpow(&(&pk - BigInt::one() - (&pk / &pb)), &pk); // lc^{φ(p^k)-1}
    let monic_f: Zp = zp_reduce(&f.iter().map(|c| c * &lc_inv).collect(), &pk);
    let mut lifted = hensel_lift_all(&monic_f, &modular, p, k);

    let half = &pk >> 1usize;
    let symmetric = |a: &Zp| -> Vec<BigInt> {
        a.iter()
            .map(|c| if c > &half { c - &pk } else { c.clone() })
            .collect()
    };

    let mut out = Vec::new();
    let mut rest: Vec<BigInt> = f.to_vec();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        let idx: Vec<usize> = (0..lifted.len()).collect();
        for subset in combinations(&idx, size) {
            let lc_rest = rest.last().unwrap().clone();
            let prod = subset.iter().fold(vec![lc_rest.mod_floor(&pk)], |acc, &i| {
                zp_mul(&acc, &lifted[i], &pk)
            });
            let cand = int_primitive(&symmetric(&prod));
            if let Some(q) = int_div_exact(&rest, &cand) {
                out.push(cand);
                rest = q;
                lifted = lifted
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, g)| g)
                    .collect();
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if rest.len() > 1 {
        out.push(int_primitive(&rest));
    }
    out
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut tail in combinations(&items[i + 1..], k - 1) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

/// Complete factorization over ℚ into primitive irreducible factors with
/// multiplicities, sorted by degree then coefficients. Constants are dropped.
pub fn factor(f: &RationalPoly) -> Vec<(RationalPoly, u32)> {
    let mut out = Vec::new();
    for (part, mult) in f.squarefree_decomposition() {
        let ints = part.primitive_int_coeffs();
        for g in zassenhaus(&ints) {
            out.push((RationalPoly::from_bigints(&g), mult));
        }
    }
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.primitive_int_coeffs().cmp(&b.0.primitive_int_coeffs()))
    });
    out
}

/// Distinct irreducible factors (primitive), multiplicities discarded.
pub fn irreducible_factors(f: &RationalPoly) -> Vec<RationalPoly> {
    factor(f).into_iter().map(|(g, _)| g).collect()
}
