//! Dense reference constructions built from 2x2 matrices and Kronecker
//! products, without going through the Pauli-string algebra.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

pub type Mat = DMatrix<C64>;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn eye(dim: usize) -> Mat {
    Mat::identity(dim, dim)
}

pub fn x() -> Mat {
    Mat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)])
}

pub fn z() -> Mat {
    Mat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)])
}

pub fn y() -> Mat {
    Mat::from_row_slice(2, 2, &[c(0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), c(0.0)])
}

/// `|0><0|`
pub fn p0() -> Mat {
    Mat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)])
}

/// `|1><1|`
pub fn p1() -> Mat {
    Mat::from_row_slice(2, 2, &[c(0.0), c(0.0), c(0.0), c(1.0)])
}

/// Tensor product with `factors[q]` on qubit `q` (identity elsewhere).
/// Qubit `q` is bit `q` of the basis index, so qubit 0 is the rightmost
/// Kronecker factor.
pub fn embed(n: usize, factors: &[(usize, Mat)]) -> Mat {
    let mut out = eye(1);
    for q in (0..n).rev() {
        let mut local = eye(2);
        for (site, m) in factors {
            if *site == q {
                local = &local * m;
            }
        }
        out = out.kronecker(&local);
    }
    out
}

pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max)
}

pub mod chain {
    use super::*;

    fn control(n: usize, site: usize, w0: f64, w1: f64) -> Mat {
        embed(n, &[(site, p0() * c(w0) + p1() * c(w1))])
    }

    /// Plaquette `i` written out as its four controlled terms.
    pub fn plaquette(n: usize, i: usize, mixed_sign: f64) -> Mat {
        let l = (i + n - 1) % n;
        let r = (i + 1) % n;
        let xi = embed(n, &[(i, x())]);
        let ll = |a: Mat| embed(n, &[(l, a)]);
        let rr = |a: Mat| embed(n, &[(r, a)]);
        &ll(p0()) * &xi * &rr(p0())
            + &ll(p1()) * &xi * &rr(p0()) * c(0.5 * mixed_sign)
            + &ll(p0()) * &xi * &rr(p1()) * c(0.5 * mixed_sign)
            + &ll(p1()) * &xi * &rr(p1()) * c(0.25)
    }

    /// The same operator through the factorized control form.
    pub fn plaquette_factorized(n: usize, i: usize) -> Mat {
        let l = (i + n - 1) % n;
        let r = (i + 1) % n;
        control(n, l, 1.0, 0.5) * embed(n, &[(i, x())]) * control(n, r, 1.0, 0.5)
    }

    pub fn magnetic(n: usize, g: f64, u: &[f64], mixed_sign: f64) -> Mat {
        let dim = 1 << n;
        let mut h = Mat::zeros(dim, dim);
        for i in 0..n {
            let b = plaquette(n, i, mixed_sign);
            let bd = b.adjoint();
            h += (eye(dim) * c(4.0) - (b + bd) * c(1.0 / u[i])) * c(1.0 / (2.0 * g * g));
        }
        h
    }

    fn rung(n: usize, a: usize, b: usize) -> Mat {
        embed(n, &[(a, p1()), (b, p0())]) + embed(n, &[(a, p0()), (b, p1())])
    }

    pub fn electric(n: usize, g: f64) -> Mat {
        let dim = 1 << n;
        let mut h = Mat::zeros(dim, dim);
        for i in 0..n {
            h += embed(n, &[(i, p1())]) * c(2.0) + rung(n, i, (i + 1) % n);
        }
        h * c(3.0 * g * g / 8.0)
    }

    pub fn electric_at(n: usize, g: f64, i: usize) -> Mat {
        let l = (i + n - 1) % n;
        let r = (i + 1) % n;
        (embed(n, &[(i, p1())]) * c(2.0) + rung(n, i, r) + rung(n, l, i)) * c(3.0 * g * g / 8.0)
    }

    pub fn hamiltonian(n: usize, g: f64, u: &[f64]) -> Mat {
        electric(n, g) + magnetic(n, g, u, 1.0)
    }

    pub fn alt_hamiltonian(n: usize, g: f64, u: &[f64]) -> Mat {
        electric(n, g) + magnetic(n, g, u, -1.0)
    }

    /// `prod_k exp(-i pi/4 (-1)^k Z_k Z_{k+1})`, diagonal in the computational basis.
    pub fn basis_change(n: usize) -> Mat {
        let dim = 1 << n;
        let mut u = Mat::zeros(dim, dim);
        for b in 0..dim {
            let mut phase = 0.0;
            for k in 0..n {
                let zk = if b >> k & 1 == 0 { 1.0 } else { -1.0 };
                let zk1 = if b >> ((k + 1) % n) & 1 == 0 { 1.0 } else { -1.0 };
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                phase -= std::f64::consts::FRAC_PI_4 * sign * zk * zk1;
            }
            u[(b, b)] = C64::from_polar(1.0, phase);
        }
        u
    }
}

pub mod honeycomb {
    use super::*;

    pub const RING: [(isize, isize); 6] = [(1, -1), (1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1)];

    pub fn qubit(lx: usize, ly: usize, i: isize, j: isize) -> Option<usize> {
        (i >= 0 && j >= 0 && (i as usize) < lx && (j as usize) < ly).then(|| i as usize + j as usize * lx)
    }

    /// `Z` on a live cell, `+1` on a frozen one.
    fn zf(n: usize, q: Option<usize>) -> Mat {
        match q {
            Some(q) => embed(n, &[(q, z())]),
            None => eye(1 << n),
        }
    }

    fn proj(n: usize, q: Option<usize>, level: u8) -> Mat {
        let dim = 1 << n;
        match (q, level) {
            (Some(q), 0) => embed(n, &[(q, p0())]),
            (Some(q), _) => embed(n, &[(q, p1())]),
            (None, 0) => eye(dim),
            (None, _) => Mat::zeros(dim, dim),
        }
    }

    fn ring(lx: usize, ly: usize, i: usize, j: usize) -> Vec<Option<usize>> {
        RING.iter()
            .map(|(di, dj)| qubit(lx, ly, i as isize + di, j as isize + dj))
            .collect()
    }

    pub fn plaquette(lx: usize, ly: usize, i: usize, j: usize) -> Mat {
        let n = lx * ly;
        let s = 0.5 / std::f64::consts::SQRT_2;
        let k = ring(lx, ly, i, j);
        let mut out = embed(n, &[(i + j * lx, x())]);
        for a in 0..6 {
            let zz = zf(n, k[a]) * zf(n, k[(a + 1) % 6]);
            out = out * (zz * c(0.5 - s) + eye(1 << n) * c(0.5 + s));
        }
        out
    }

    pub fn magnetic(lx: usize, ly: usize, g: f64, u: &[f64]) -> Mat {
        let n = lx * ly;
        let dim = 1 << n;
        let pref = 2.0 / (3.0 * 3f64.sqrt() * g * g);
        let mut h = Mat::zeros(dim, dim);
        for q in 0..n {
            let b = plaquette(lx, ly, q % lx, q / lx);
            let bd = b.adjoint();
            h += (eye(dim) * c(4.0) - (b + bd) * c(1.0 / u[q])) * c(pref);
        }
        h
    }

    pub fn electric(lx: usize, ly: usize, g: f64) -> Mat {
        let n = lx * ly;
        let dim = 1 << n;
        let mut h = Mat::zeros(dim, dim);
        for q in 0..n {
            let (i, j) = ((q % lx) as isize, (q / lx) as isize);
            let mut bracket = eye(dim) * c(3.0);
            for (di, dj) in [(1, -1), (1, 0), (0, 1)] {
                bracket -= proj(n, qubit(lx, ly, i + di, j + dj), 1);
            }
            h += proj(n, Some(q), 1) * bracket;
        }
        h * c(3.0 * 3f64.sqrt() * g * g / 4.0)
    }

    pub fn electric_at(lx: usize, ly: usize, g: f64, i: usize, j: usize) -> Mat {
        let n = lx * ly;
        let dim = 1 << n;
        let q = Some(i + j * lx);
        let mut s0 = Mat::zeros(dim, dim);
        let mut s1 = Mat::zeros(dim, dim);
        for k in ring(lx, ly, i, j) {
            s0 += proj(n, k, 0);
            s1 += proj(n, k, 1);
        }
        (proj(n, q, 1) * s0 + proj(n, q, 0) * s1) * c(3.0 * 3f64.sqrt() * g * g / 8.0)
    }

    pub fn hamiltonian(lx: usize, ly: usize, g: f64, u: &[f64]) -> Mat {
        electric(lx, ly, g) + magnetic(lx, ly, g, u)
    }
}

/// `<psi|M|psi>` for a dense matrix.
pub fn expect(m: &Mat, psi: &[C64]) -> C64 {
    let v = nalgebra::DVector::from_column_slice(psi);
    (v.adjoint() * m * &v)[(0, 0)]
}

/// Von Neumann entropy in bits from the explicit reduced density matrix.
pub fn entropy_bits(psi: &[C64], n: usize, cut: &[usize]) -> f64 {
    let k = cut.len();
    let rest: Vec<usize> = (0..n).filter(|q| !cut.contains(q)).collect();
    let dim_a = 1 << k;
    let mut rho = Mat::zeros(dim_a, dim_a);
    let index = |a: usize, b: usize| {
        let mut idx = 0;
        for (p, &q) in cut.iter().enumerate() {
            idx |= (a >> p & 1) << q;
        }
        for (p, &q) in rest.iter().enumerate() {
            idx |= (b >> p & 1) << q;
        }
        idx
    };
    for a in 0..dim_a {
        for a2 in 0..dim_a {
            let mut s = C64::default();
            for b in 0..1usize << rest.len() {
                s += psi[index(a, b)] * psi[index(a2, b)].conj();
            }
            rho[(a, a2)] = s;
        }
    }
    rho.symmetric_eigenvalues()
        .iter()
        .filter(|l| **l > 1e-15)
        .map(|l| -l * l.log2())
        .sum()
}

/// Stabilizer Renyi entropies (bits) by enumerating all `4^n` Pauli
/// strings as dense matrices.
pub fn sre_bits(psi: &[C64], n: usize) -> (f64, f64) {
    let paulis = [eye(2), x(), y(), z()];
    let d = (1usize << n) as f64;
    let (mut shannon, mut purity) = (0.0, 0.0);
    for code in 0..4usize.pow(n as u32) {
        let factors: Vec<(usize, Mat)> = (0..n).map(|q| (q, paulis[code / 4usize.pow(q as u32) % 4].clone())).collect();
        let p = embed(n, &factors);
        let xi = expect(&p, psi).re.powi(2) / d;
        if xi > 0.0 {
            shannon -= xi * xi.log2();
            purity += xi * xi;
        }
    }
    (shannon - n as f64, -purity.log2() - n as f64)
}
