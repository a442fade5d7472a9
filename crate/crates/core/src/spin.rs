//! Built-in spin-1/2 and spin-1 observables and the reproduction of the
//! worked numeric tables, serving as the golden-test corpus.
//!
//! Golden constants are stored as (integer, sqrt2-coefficient, denominator)
//! triples and realized to doubles at load, so no decimal transcription is
//! involved.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hermitian::{validate_projector, HermitianOperator, Projector, Tolerances};
use crate::improb::{bounds, dominance_spectrum};
use crate::matrix::{commutator, fro_norm, ComplexMatrix};

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// (a + b*sqrt(2)) / d as a double.
fn sym(a: i64, b: i64, d: i64) -> f64 {
    (a as f64 + b as f64 * SQRT_2) / d as f64
}

/// Complex entry from two symbolic triples.
fn syme(re: (i64, i64, i64), im: (i64, i64, i64)) -> Complex64 {
    Complex64::new(sym(re.0, re.1, re.2), sym(im.0, im.1, im.2))
}

fn real_matrix(dim: usize, triples: &[&[(i64, i64, i64)]]) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |i, j| {
        let (a, b, d) = triples[i][j];
        Complex64::new(sym(a, b, d), 0.0)
    })
}

fn projector(m: DMatrix<Complex64>) -> Projector {
    validate_projector(ComplexMatrix::new(m).unwrap(), &Tolerances::default())
        .expect("golden constant is a projector")
}

/// Spin observables and projector families. Family index 0, 1, 2 corresponds
/// to the component value +1, 0, -1.
#[derive(Debug, Clone)]
pub struct SpinCatalog {
    pub lx: HermitianOperator,
    pub ly: HermitianOperator,
    pub lz: HermitianOperator,
    pub px: [Projector; 3],
    pub py: [Projector; 3],
    pub pz: [Projector; 3],
    /// Spin-1/2 projectors, index 0/1 for component +-1.
    pub half_px: [Projector; 2],
    pub half_py: [Projector; 2],
    pub half_pz: [Projector; 2],
}

impl SpinCatalog {
    pub fn family(&self, axis: char) -> &[Projector; 3] {
        match axis {
            'x' => &self.px,
            'y' => &self.py,
            'z' => &self.pz,
            _ => panic!("axis must be x, y or z"),
        }
    }

    /// Sum of the listed members of the x family (indices 0, 1, 2 for
    /// component +1, 0, -1).
    pub fn sum_x(&self, idx: &[usize]) -> Projector {
        sum_family(&self.px, idx)
    }

    pub fn sum_z(&self, idx: &[usize]) -> Projector {
        sum_family(&self.pz, idx)
    }
}

fn sum_family(family: &[Projector; 3], idx: &[usize]) -> Projector {
    let n = family[0].dim();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for &i in idx {
        m += family[i].matrix();
    }
    projector(m)
}

/// The spin-1 (and spin-1/2) catalog with exact rational/sqrt(2) entries.
pub fn spin1_catalog() -> SpinCatalog {
    let lx = real_matrix(
        3,
        &[
            &[(0, 0, 1), (0, 1, 2), (0, 0, 1)],
            &[(0, 1, 2), (0, 0, 1), (0, 1, 2)],
            &[(0, 0, 1), (0, 1, 2), (0, 0, 1)],
        ],
    );
    let z = (0, 0, 1);
    let ly = DMatrix::from_fn(3, 3, |i, j| match (i, j) {
        (0, 1) => syme(z, (0, -1, 2)),
        (1, 0) => syme(z, (0, 1, 2)),
        (1, 2) => syme(z, (0, -1, 2)),
        (2, 1) => syme(z, (0, 1, 2)),
        _ => Complex64::default(),
    });
    let lz = real_matrix(
        3,
        &[
            &[(1, 0, 1), z, z],
            &[z, (0, 0, 1), z],
            &[z, z, (-1, 0, 1)],
        ],
    );

    let px1 = real_matrix(
        3,
        &[
            &[(1, 0, 4), (0, 1, 4), (1, 0, 4)],
            &[(0, 1, 4), (2, 0, 4), (0, 1, 4)],
            &[(1, 0, 4), (0, 1, 4), (1, 0, 4)],
        ],
    );
    let px0 = real_matrix(
        3,
        &[
            &[(1, 0, 2), z, (-1, 0, 2)],
            &[z, z, z],
            &[(-1, 0, 2), z, (1, 0, 2)],
        ],
    );
    let pxm1 = real_matrix(
        3,
        &[
            &[(1, 0, 4), (0, -1, 4), (1, 0, 4)],
            &[(0, -1, 4), (2, 0, 4), (0, -1, 4)],
            &[(1, 0, 4), (0, -1, 4), (1, 0, 4)],
        ],
    );

    let py1 = DMatrix::from_fn(3, 3, |i, j| match (i, j) {
        (0, 0) | (2, 2) => Complex64::new(0.25, 0.0),
        (1, 1) => Complex64::new(0.5, 0.0),
        (0, 1) | (1, 2) => syme(z, (0, -1, 4)),
        (1, 0) | (2, 1) => syme(z, (0, 1, 4)),
        (0, 2) | (2, 0) => Complex64::new(-0.25, 0.0),
        _ => Complex64::default(),
    });
    let py0 = real_matrix(
        3,
        &[
            &[(1, 0, 2), z, (1, 0, 2)],
            &[z, z, z],
            &[(1, 0, 2), z, (1, 0, 2)],
        ],
    );
    let pym1 = DMatrix::from_fn(3, 3, |i, j| match (i, j) {
        (0, 0) | (2, 2) => Complex64::new(0.25, 0.0),
        (1, 1) => Complex64::new(0.5, 0.0),
        (0, 1) | (1, 2) => syme(z, (0, 1, 4)),
        (1, 0) | (2, 1) => syme(z, (0, -1, 4)),
        (0, 2) | (2, 0) => Complex64::new(-0.25, 0.0),
        _ => Complex64::default(),
    });

    let basis = |k: usize| {
        DMatrix::from_fn(3, 3, |i, j| {
            if i == k && j == k {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::default()
            }
        })
    };

    let half = |entries: [[Complex64; 2]; 2]| {
        projector(DMatrix::from_fn(2, 2, |i, j| entries[i][j]))
    };
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let half_px = [
        half([[c(0.5, 0.0), c(0.5, 0.0)], [c(0.5, 0.0), c(0.5, 0.0)]]),
        half([[c(0.5, 0.0), c(-0.5, 0.0)], [c(-0.5, 0.0), c(0.5, 0.0)]]),
    ];
    let half_py = [
        half([[c(0.5, 0.0), c(0.0, -0.5)], [c(0.0, 0.5), c(0.5, 0.0)]]),
        half([[c(0.5, 0.0), c(0.0, 0.5)], [c(0.0, -0.5), c(0.5, 0.0)]]),
    ];
    let half_pz = [
        half([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]]),
        half([[c(0.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]),
    ];

    SpinCatalog {
        lx: HermitianOperator::from_parts_unchecked(lx),
        ly: HermitianOperator::from_parts_unchecked(ly),
        lz: HermitianOperator::from_parts_unchecked(lz),
        px: [projector(px1), projector(px0), projector(pxm1)],
        py: [projector(py1), projector(py0), projector(pym1)],
        pz: [projector(basis(0)), projector(basis(1)), projector(basis(2))],
        half_px,
        half_py,
        half_pz,
    }
}

/// One compared row of the golden-table report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GoldenRow {
    pub name: String,
    pub max_deviation: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GoldenReport {
    pub rows: Vec<GoldenRow>,
    pub max_deviation: f64,
    pub all_pass: bool,
}

impl GoldenReport {
    fn push(&mut self, name: impl Into<String>, dev: f64, tol: f64) {
        let pass = dev <= tol;
        self.rows.push(GoldenRow {
            name: name.into(),
            max_deviation: dev,
            pass,
        });
        self.max_deviation = self.max_deviation.max(dev);
        self.all_pass &= pass;
    }

    pub fn render_pretty(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push_str(&format!(
                "{:<58} {:>12.3e}  {}\n",
                row.name,
                row.max_deviation,
                if row.pass { "ok" } else { "FAIL" }
            ));
        }
        out.push_str(&format!(
            "max deviation {:.3e}  => {}\n",
            self.max_deviation,
            if self.all_pass { "all rows ok" } else { "FAILURES PRESENT" }
        ));
        out
    }
}

const GOLDEN_TOL: f64 = 1e-10;

fn golden_real(dim: usize, triples: &[&[(i64, i64, i64)]]) -> DMatrix<Complex64> {
    real_matrix(dim, triples)
}

fn dev(actual: &DMatrix<Complex64>, golden: &DMatrix<Complex64>) -> f64 {
    fro_norm(&(actual - golden))
}

/// Recomputes every worked spin-1 table and compares against the golden
/// constants. Rows deviating by more than 1e-10 are marked failed.
pub fn reproduce_tables() -> Result<GoldenReport> {
    let cat = spin1_catalog();
    let mut report = GoldenReport {
        rows: Vec::new(),
        max_deviation: 0.0,
        all_pass: true,
    };
    let z = (0, 0, 1);
    let n3 = DMatrix::<Complex64>::zeros(3, 3);

    // Rank-1 x/z pairs: upper operators, lower operators all vanish.
    struct RankOneCase {
        name: &'static str,
        x_idx: usize,
        z_idx: usize,
        golden_upper: DMatrix<Complex64>,
    }
    let gg2 = |sign: i64| {
        golden_real(
            3,
            &[
                &[(1, 0, 4), z, z],
                &[z, (1, 0, 6), (0, sign, 12)],
                &[z, (0, sign, 12), (1, 0, 12)],
            ],
        )
    };
    let gg3 = |sign: i64| {
        golden_real(
            3,
            &[
                &[(1, 0, 12), (0, sign, 12), z],
                &[(0, sign, 12), (1, 0, 6), z],
                &[z, z, (1, 0, 4)],
            ],
        )
    };
    let gg4 = golden_real(
        3,
        &[&[(1, 0, 2), z, z], &[z, z, z], &[z, z, (1, 0, 2)]],
    );
    // For uo(Px_{+-1}, Pz0) the corner entries are +1/4 independently of the
    // sign: forced by tr[uo(Px_{+-1}, Pz0) Py_0] = 1/2 from the uo-on-L^y
    // eigenstate table, and confirmed by direct evaluation of
    // I - (p-q)^2 - g(I-p, I-q).
    let gg5 = golden_real(
        3,
        &[
            &[(1, 0, 4), z, (1, 0, 4)],
            &[z, (1, 0, 2), z],
            &[(1, 0, 4), z, (1, 0, 4)],
        ],
    );
    let rank_one_cases = vec![
        RankOneCase { name: "uo(Pz0, Px0) = 0", x_idx: 1, z_idx: 1, golden_upper: n3.clone() },
        RankOneCase { name: "uo(Px+1, Pz+1)", x_idx: 0, z_idx: 0, golden_upper: gg2(1) },
        RankOneCase { name: "uo(Px-1, Pz+1)", x_idx: 2, z_idx: 0, golden_upper: gg2(-1) },
        RankOneCase { name: "uo(Px+1, Pz-1)", x_idx: 0, z_idx: 2, golden_upper: gg3(1) },
        RankOneCase { name: "uo(Px-1, Pz-1)", x_idx: 2, z_idx: 2, golden_upper: gg3(-1) },
        RankOneCase { name: "uo(Px0, Pz+1)", x_idx: 1, z_idx: 0, golden_upper: gg4.clone() },
        RankOneCase { name: "uo(Px0, Pz-1)", x_idx: 1, z_idx: 2, golden_upper: gg4.clone() },
        RankOneCase { name: "uo(Px+1, Pz0)", x_idx: 0, z_idx: 1, golden_upper: gg5.clone() },
        RankOneCase { name: "uo(Px-1, Pz0)", x_idx: 2, z_idx: 1, golden_upper: gg5 },
    ];
    for case in &rank_one_cases {
        let pair = bounds(&cat.px[case.x_idx], &cat.pz[case.z_idx])?;
        let d = dev(pair.upper.matrix(), &case.golden_upper)
            .max(fro_norm(pair.lower.matrix()));
        report.push(case.name, d, GOLDEN_TOL);
    }

    // Sum of the nine upper operators and its eigenvalues 8/3, 5/3, 5/3.
    let mut sum = DMatrix::<Complex64>::zeros(3, 3);
    for x_idx in 0..3 {
        for z_idx in 0..3 {
            sum += bounds(&cat.px[x_idx], &cat.pz[z_idx])?.upper.matrix();
        }
    }
    // Corner +1/2 follows from the corrected corner sign of the two
    // uo(Px_{+-1}, Pz0) operators; the eigenvalues (8/3, 5/3, 5/3) are
    // unchanged by that sign.
    let golden_sum = golden_real(
        3,
        &[
            &[(13, 0, 6), z, (1, 0, 2)],
            &[z, (5, 0, 3), z],
            &[(1, 0, 2), z, (13, 0, 6)],
        ],
    );
    report.push("sum of nine upper operators", dev(&sum, &golden_sum), GOLDEN_TOL);
    let spec = crate::hermitian::eigh(&HermitianOperator::from_parts_unchecked(sum))?;
    let golden_eigs = [5.0 / 3.0, 5.0 / 3.0, 8.0 / 3.0];
    let eig_dev = spec
        .eigenvalues
        .iter()
        .zip(golden_eigs)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max);
    report.push("sum eigenvalues (8/3, 5/3, 5/3)", eig_dev, GOLDEN_TOL);

    // State-dependent table: tr[uo(Px_eps, Pz_eta) Py_chi].
    let mut table_dev = 0.0_f64;
    let value = |eps: i64, eta: i64, chi: i64| -> f64 {
        if eps * eta != 0 {
            1.0 / 6.0
        } else if eps == 0 && eta == 0 {
            0.0
        } else if chi != 0 {
            0.25
        } else {
            0.5
        }
    };
    let comp = [1i64, 0, -1];
    for (xi, &eps) in comp.iter().enumerate() {
        for (zi, &eta) in comp.iter().enumerate() {
            let upper = bounds(&cat.px[xi], &cat.pz[zi])?.upper;
            for (yi, &chi) in comp.iter().enumerate() {
                let got = (upper.matrix() * cat.py[yi].matrix()).trace().re;
                table_dev = table_dev.max((got - value(eps, eta, chi)).abs());
            }
        }
    }
    report.push("upper probabilities on L^y eigenstates", table_dev, GOLDEN_TOL);

    // Rank-2 pairs with nonzero lower probability.
    struct RankTwoCase {
        name: &'static str,
        p: Projector,
        q: Projector,
        lower: DMatrix<Complex64>,
        upper: DMatrix<Complex64>,
        gap_eigs: [f64; 3],
    }
    let kk1 = |sign: i64| RankTwoCase {
        name: if sign > 0 { "lo/uo(Px0+Px+1, Pz+1+Pz0)" } else { "lo/uo(Px0+Px-1, Pz+1+Pz0)" },
        p: cat.sum_x(&[1, if sign > 0 { 0 } else { 2 }]),
        q: cat.sum_z(&[0, 1]),
        lower: golden_real(
            3,
            &[
                &[(2, 0, 3), (0, sign, 3), z],
                &[(0, sign, 3), (1, 0, 3), z],
                &[z, z, z],
            ],
        ),
        upper: golden_real(
            3,
            &[
                &[(3, 0, 4), (0, sign, 4), z],
                &[(0, sign, 4), (1, 0, 2), z],
                &[z, z, (1, 0, 4)],
            ],
        ),
        gap_eigs: [0.0, 0.25, 0.25],
    };
    let kk2 = |sign: i64| RankTwoCase {
        name: if sign > 0 { "lo/uo(Px0+Px+1, Pz-1+Pz0)" } else { "lo/uo(Px0+Px-1, Pz-1+Pz0)" },
        p: cat.sum_x(&[1, if sign > 0 { 0 } else { 2 }]),
        q: cat.sum_z(&[2, 1]),
        lower: golden_real(
            3,
            &[
                &[z, z, z],
                &[z, (1, 0, 3), (0, sign, 3)],
                &[z, (0, sign, 3), (2, 0, 3)],
            ],
        ),
        upper: golden_real(
            3,
            &[
                &[(1, 0, 4), z, z],
                &[z, (1, 0, 2), (0, sign, 4)],
                &[z, (0, sign, 4), (3, 0, 4)],
            ],
        ),
        gap_eigs: [0.0, 0.25, 0.25],
    };
    let kk3 = |z_idx: usize| RankTwoCase {
        name: if z_idx == 0 { "lo/uo(Px+1+Px-1, Pz+1+Pz0)" } else { "lo/uo(Px+1+Px-1, Pz-1+Pz0)" },
        p: cat.sum_x(&[0, 2]),
        q: cat.sum_z(&[z_idx, 1]),
        lower: golden_real(3, &[&[z, z, z], &[z, (1, 0, 1), z], &[z, z, z]]),
        upper: golden_real(
            3,
            &[&[(1, 0, 2), z, z], &[z, (1, 0, 1), z], &[z, z, (1, 0, 2)]],
        ),
        gap_eigs: [0.0, 0.5, 0.5],
    };
    let kk4 = |sign: i64| RankTwoCase {
        name: if sign > 0 { "lo/uo(Px0+Px+1, Pz+1+Pz-1)" } else { "lo/uo(Px0+Px-1, Pz+1+Pz-1)" },
        p: cat.sum_x(&[1, if sign > 0 { 0 } else { 2 }]),
        q: cat.sum_z(&[0, 2]),
        lower: golden_real(
            3,
            &[
                &[(1, 0, 2), z, (-1, 0, 2)],
                &[z, z, z],
                &[(-1, 0, 2), z, (1, 0, 2)],
            ],
        ),
        upper: golden_real(
            3,
            &[
                &[(3, 0, 4), z, (-1, 0, 4)],
                &[z, (1, 0, 2), z],
                &[(-1, 0, 4), z, (3, 0, 4)],
            ],
        ),
        gap_eigs: [0.0, 0.5, 0.5],
    };
    let kk5 = {
        let m = golden_real(
            3,
            &[
                &[(1, 0, 2), z, (1, 0, 2)],
                &[z, z, z],
                &[(1, 0, 2), z, (1, 0, 2)],
            ],
        );
        RankTwoCase {
            name: "lo = uo(Px+1+Px-1, Pz+1+Pz-1)",
            p: cat.sum_x(&[0, 2]),
            q: cat.sum_z(&[0, 2]),
            lower: m.clone(),
            upper: m,
            gap_eigs: [0.0, 0.0, 0.0],
        }
    };
    let rank_two_cases = vec![
        kk1(1), kk1(-1), kk2(1), kk2(-1), kk3(0), kk3(2), kk4(1), kk4(-1), kk5,
    ];
    for case in rank_two_cases {
        let pair = bounds(&case.p, &case.q)?;
        let mut d = dev(pair.lower.matrix(), &case.lower).max(dev(pair.upper.matrix(), &case.upper));
        let gap = HermitianOperator::from_parts_unchecked(pair.upper.matrix() - pair.lower.matrix());
        let gap_spec = crate::hermitian::eigh(&gap)?;
        for (a, b) in gap_spec.eigenvalues.iter().zip(case.gap_eigs) {
            d = d.max((a - b).abs());
        }
        report.push(case.name, d, GOLDEN_TOL);
    }

    // Dominance spectra, with the non-commutation witness.
    let lo_pair_a = (cat.sum_x(&[1, 2]), cat.sum_z(&[0, 1]));
    let uo_pair_a = (cat.sum_x(&[1, 0]), cat.sum_z(&[0, 1]));
    let spec_a = dominance_spectrum(&lo_pair_a.0, &lo_pair_a.1, &uo_pair_a.0, &uo_pair_a.1)?;
    let s393 = 393.0_f64.sqrt();
    let golden_a = [-(s393 + 3.0) / 24.0, -0.25, (s393 - 3.0) / 24.0];
    let dev_a = spec_a
        .iter()
        .zip(golden_a)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max);
    report.push("dominance spectrum ((+-sqrt393 - 3)/24, -1/4)", dev_a, GOLDEN_TOL);

    let lo_a = bounds(&lo_pair_a.0, &lo_pair_a.1)?.lower;
    let uo_a = bounds(&uo_pair_a.0, &uo_pair_a.1)?.upper;
    let comm = fro_norm(&commutator(lo_a.matrix(), uo_a.matrix()));
    report.push(
        "cross-pair operators do not commute",
        if comm > 1e-6 { 0.0 } else { 1.0 },
        GOLDEN_TOL,
    );

    let lo_pair_b = (cat.sum_x(&[1, 0]), cat.sum_z(&[0, 1]));
    let uo_pair_b = (cat.sum_x(&[0, 2]), cat.sum_z(&[0, 1]));
    let spec_b = dominance_spectrum(&lo_pair_b.0, &lo_pair_b.1, &uo_pair_b.0, &uo_pair_b.1)?;
    let s57 = 57.0_f64.sqrt();
    let golden_b = [-(s57 + 3.0) / 12.0, -0.5, (s57 - 3.0) / 12.0];
    let dev_b = spec_b
        .iter()
        .zip(golden_b)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max);
    report.push("dominance spectrum ((+-sqrt57 - 3)/12, -1/2)", dev_b, GOLDEN_TOL);

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn families_resolve_identity() {
        let cat = spin1_catalog();
        for family in [&cat.px, &cat.py, &cat.pz] {
            let sum: DMatrix<Complex64> =
                family.iter().map(|p| p.matrix().clone()).sum();
            assert!(fro_norm(&(sum - DMatrix::identity(3, 3))) < 1e-12);
            for (i, a) in family.iter().enumerate() {
                for (j, b) in family.iter().enumerate() {
                    let prod = a.matrix() * b.matrix();
                    let expect = if i == j { a.matrix().clone() } else { DMatrix::zeros(3, 3) };
                    assert!(fro_norm(&(prod - expect)) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn spin_operators_decompose_over_projectors() {
        let cat = spin1_catalog();
        for (l, family) in [(&cat.lx, &cat.px), (&cat.ly, &cat.py), (&cat.lz, &cat.pz)] {
            let mut sum = DMatrix::<Complex64>::zeros(3, 3);
            for (j, p) in family.iter().enumerate() {
                let weight = [1.0, 0.0, -1.0][j];
                sum += p.matrix() * Complex64::new(weight, 0.0);
            }
            assert!(fro_norm(&(sum - l.matrix())) < 1e-12);
        }
    }

    #[test]
    fn zero_components_are_mutually_orthogonal() {
        let cat = spin1_catalog();
        for (a, b) in [(&cat.px[1], &cat.py[1]), (&cat.px[1], &cat.pz[1]), (&cat.pz[1], &cat.py[1])] {
            assert!(fro_norm(&(a.matrix() * b.matrix())) < 1e-12);
        }
    }

    #[test]
    fn cross_family_overlaps_match_closed_form() {
        let cat = spin1_catalog();
        let families = [('x', &cat.px), ('y', &cat.py), ('z', &cat.pz)];
        for (a_name, fam_a) in families {
            for (b_name, fam_b) in families {
                if a_name == b_name {
                    continue;
                }
                for (j, a) in fam_a.iter().enumerate() {
                    for (k, b) in fam_b.iter().enumerate() {
                        let overlap = (a.matrix() * b.matrix()).trace().re;
                        let j_zero = j == 1;
                        let k_zero = k == 1;
                        let expect = if j_zero && k_zero {
                            0.0
                        } else if j_zero || k_zero {
                            0.5
                        } else {
                            0.25
                        };
                        assert_abs_diff_eq!(overlap, expect, epsilon = 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn lz_eigenvectors_are_standard_basis() {
        let cat = spin1_catalog();
        for (k, p) in cat.pz.iter().enumerate() {
            assert_abs_diff_eq!(p.matrix()[(k, k)].re, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn golden_tables_reproduce() {
        let report = reproduce_tables().unwrap();
        assert!(report.all_pass, "{}", report.render_pretty());
        assert!(report.max_deviation <= 1e-10);
    }
}
