//! Shared test oracles, independent of the engine implementations.
//!
//! Dense operators are built term by term from Kronecker products of
//! single-site Pauli matrices, never through the optimized builders they
//! are used to check.
//!
//! Not every integration-test binary uses every oracle.
#![allow(dead_code)]

use ndarray::Array2;
use num_complex::Complex64 as C64;

use kinkchain::model::ModelParams;

pub fn pauli(op: char) -> Array2<C64> {
    let z = C64::new(0.0, 0.0);
    let o = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match op {
        'i' => ndarray::array![[o, z], [z, o]],
        'x' => ndarray::array![[z, o], [o, z]],
        'y' => ndarray::array![[z, -i], [i, z]],
        'z' => ndarray::array![[o, z], [z, -o]],
        other => panic!("unknown Pauli label {other:?}"),
    }
}

pub fn kron(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Operator with the given single-site Paulis at 1-based sites (site 1 is
/// the most significant factor), identity elsewhere.
pub fn pauli_string(length: usize, ops: &[(usize, char)]) -> Array2<C64> {
    let mut out = Array2::from_diag_elem(1, C64::new(1.0, 0.0));
    for site in 1..=length {
        let op = ops.iter().find(|&&(s, _)| s == site).map(|&(_, c)| c).unwrap_or('i');
        out = kron(&out, &pauli(op));
    }
    out
}

/// Term-by-term dense Hamiltonian oracle for the model.
pub fn dense_hamiltonian_oracle(p: &ModelParams) -> Array2<C64> {
    let length = p.length;
    let dim = 1usize << length;
    let mut h: Array2<C64> = Array2::zeros((dim, dim));
    for i in 1..length {
        h = h - pauli_string(length, &[(i, 'z'), (i + 1, 'z')]).mapv(|x| x * p.j0);
    }
    for i in 2..length {
        h = h - pauli_string(length, &[(i, 'x')]).mapv(|x| x * p.g);
    }
    for i in 1..=length {
        h = h - pauli_string(length, &[(i, 'z')]).mapv(|x| x * p.h);
    }
    for i in 1..=length - 2 {
        h = h - pauli_string(length, &[(i, 'z'), (i + 1, 'x'), (i + 2, 'z')]).mapv(|x| x * p.j3);
    }
    h
}

/// The Kramers-Wannier transformed Hamiltonian, term by term:
/// H' = -[ j0 sum_{i>=2} Z_i + g sum X_i X_{i+1} + h sum_i prod_{j<=i} Z_j
///         - j3 sum Y_i Y_{i+1} ].
pub fn kw_dual_hamiltonian_oracle(p: &ModelParams) -> Array2<C64> {
    let length = p.length;
    let dim = 1usize << length;
    let mut h: Array2<C64> = Array2::zeros((dim, dim));
    for i in 2..=length {
        h = h - pauli_string(length, &[(i, 'z')]).mapv(|x| x * p.j0);
    }
    for i in 2..length {
        h = h - pauli_string(length, &[(i, 'x'), (i + 1, 'x')]).mapv(|x| x * p.g);
    }
    for i in 1..=length {
        let string: Vec<(usize, char)> = (1..=i).map(|j| (j, 'z')).collect();
        h = h - pauli_string(length, &string).mapv(|x| x * p.h);
    }
    for i in 2..length {
        h = h + pauli_string(length, &[(i, 'y'), (i + 1, 'y')]).mapv(|x| x * p.j3);
    }
    h
}

/// Total kink-number operator sum_links (1 - Z_i Z_{i+1}) / 2.
pub fn kink_number_oracle(length: usize) -> Array2<C64> {
    let dim = 1usize << length;
    let mut out: Array2<C64> = Array2::zeros((dim, dim));
    for i in 1..length {
        let zz = pauli_string(length, &[(i, 'z'), (i + 1, 'z')]);
        let eye = Array2::from_diag_elem(dim, C64::new(1.0, 0.0));
        out = out + (eye - zz).mapv(|x| x * 0.5);
    }
    out
}

pub fn commutator_norm(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    let c = a.dot(b) - b.dot(a);
    c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0f64, f64::max)
}
