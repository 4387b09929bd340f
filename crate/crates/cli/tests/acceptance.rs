//! Acceptance suite: one PASS/FAIL line per criterion, detail lines indented
//! below it. Exits nonzero if any criterion fails.

use std::process::Command;

use schwinger_core::fock::{hamiltonian, ModeSpace};
use schwinger_core::grassmann::{
    check_theta_representation, conjugate_motion, derive_hamiltonian, rational_to_f64, FieldPair,
};
use schwinger_core::schwinger::{
    algebra_report, boson_pair_casimir_closed_form, build_generators, casimir, casimir_spectrum,
    diagonal_value, naive_mixed_eigen_law_error, restricted_eigenvalues, safe_projector,
    safe_projector_without_vacuum, shift_theorem_check, HalfInt, JzForm, SchwingerKind,
};
use schwinger_core::thermo::{self, EnsembleSpec};
use schwinger_core::{Operator, Units};

struct Outcome {
    passed: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            passed: true,
            summary: String::new(),
            details: Vec::new(),
        }
    }

    /// Records `err ≤ tol`.
    fn within(&mut self, what: &str, err: f64, tol: f64) {
        let ok = err <= tol;
        self.passed &= ok;
        self.details.push(format!(
            "{} {what}: error {err:.3e} (tol {tol:.1e})",
            mark(ok)
        ));
    }

    fn holds(&mut self, what: &str, ok: bool) {
        self.passed &= ok;
        self.details.push(format!("{} {what}", mark(ok)));
    }

    fn note(&mut self, text: String) {
        self.details.push(format!("note: {text}"));
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok  "
    } else {
        "FAIL"
    }
}

fn gens(
    kind: SchwingerKind,
    cutoff: usize,
    form: Option<JzForm>,
    hbar: f64,
) -> schwinger_core::schwinger::SchwingerGenerators {
    build_generators(kind, cutoff, form, hbar).expect("valid generator parameters")
}

fn c1() -> Outcome {
    let mut o = Outcome::new();
    o.summary = "two-fermion Casimir spectrum is {0, 0, 3hbar^2/4, 3hbar^2/4}".into();
    for hbar in [1.0, 0.7] {
        let g = gens(SchwingerKind::FermionFermion, 2, None, hbar);
        let values = restricted_eigenvalues(&casimir(&g), &Operator::identity(4)).unwrap();
        let want = [0.0, 0.0, 0.75 * hbar * hbar, 0.75 * hbar * hbar];
        let err = values
            .iter()
            .zip(want)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        o.within(&format!("hbar={hbar}: eigenvalues {values:?}"), err, 1e-12);
    }
    o
}

fn c2() -> Outcome {
    let mut o = Outcome::new();
    o.summary = "boson pair at cutoff 12: J^2 = hbar^2 (N/2)(N/2+1) and multiplicities 2j+1".into();
    for hbar in [1.0, 1.3] {
        let g = gens(SchwingerKind::BosonBoson, 12, None, hbar);
        let safe = safe_projector(&g);
        let closed = boson_pair_casimir_closed_form(12, hbar).unwrap();
        let err = (&casimir(&g) - &closed).sandwich(&safe).unwrap().max_norm();
        o.within(
            &format!("hbar={hbar}: closed form on n1+n2 <= 10"),
            err,
            1e-10 * hbar * hbar,
        );
        let levels = casimir_spectrum(&g, &safe).unwrap();
        let expected: Vec<(HalfInt, usize)> = (0..=10)
            .map(|t| (HalfInt::from_twice(t), t as usize + 1))
            .collect();
        let got: Vec<(Option<HalfInt>, usize)> =
            levels.iter().map(|l| (l.j, l.multiplicity)).collect();
        let ok = got.len() == expected.len()
            && got
                .iter()
                .zip(&expected)
                .all(|((j, m), (wj, wm))| *j == Some(*wj) && m == wm);
        o.holds(
            &format!(
                "hbar={hbar}: j = 0, 1/2, ..., 5 each with multiplicity 2j+1 ({} levels)",
                levels.len()
            ),
            ok,
        );
    }
    o.note("the hbar^2/4 prefactor of the printed Casimir closed form would give eigenvalues 4x smaller; the matrix computation confirms hbar^2 j(j+1)".into());
    o
}

fn c3() -> Outcome {
    let mut o = Outcome::new();
    o.summary = "naive boson-fermion Casimir eigenvalue laws at cutoff 16".into();
    for hbar in [1.0, 2.0] {
        let g = gens(SchwingerKind::BosonFermionNaive, 16, None, hbar);
        let err = naive_mixed_eigen_law_error(&g).unwrap();
        o.within(
            &format!("hbar={hbar}: (hbar^2/4)n(n+2) on |n,0>, (hbar^2/4)(n^2+3) on |n,1>, n <= 14"),
            err,
            1e-10,
        );
    }
    o
}

fn c4() -> Outcome {
    let mut o = Outcome::new();
    o.summary =
        "corrected boson-fermion: J^2 = 3hbar^2/4 off the vacuum, vacuum values reported".into();
    for (form, vacuum) in [(JzForm::Projected, 0.0), (JzForm::Diagonal, 0.25)] {
        for cutoff in [6, 12, 16] {
            let g = gens(
                SchwingerKind::BosonFermionCorrected,
                cutoff,
                Some(form),
                1.0,
            );
            let p = safe_projector_without_vacuum(&g);
            let j2 = casimir(&g);
            let err = (&j2.sandwich(&p).unwrap() - &p.scale(0.75)).max_norm();
            o.within(
                &format!("{} J_z, cutoff {cutoff}: complement of |0,0>", form.label()),
                err,
                1e-10,
            );
            let v = diagonal_value(&g, &j2, 0, 0);
            o.within(
                &format!("{} J_z, cutoff {cutoff}: <0,0|J^2|0,0> = {v}", form.label()),
                (v - vacuum).abs(),
                1e-14,
            );
        }
    }
    o
}

fn c5() -> Outcome {
    let mut o = Outcome::new();
    o.summary = "su(2) residuals <= 1e-10 hbar on safe subspaces for all four maps".into();
    let cases = [
        (SchwingerKind::BosonBoson, 12, None),
        (SchwingerKind::FermionFermion, 2, None),
        (SchwingerKind::BosonFermionNaive, 16, None),
        (
            SchwingerKind::BosonFermionCorrected,
            16,
            Some(JzForm::Projected),
        ),
        (
            SchwingerKind::BosonFermionCorrected,
            16,
            Some(JzForm::Diagonal),
        ),
    ];
    for hbar in [1.0, 0.5] {
        for (kind, cutoff, form) in cases {
            let g = gens(kind, cutoff, form, hbar);
            let r = algebra_report(&g, &safe_projector(&g)).unwrap();
            let label = match form {
                Some(f) => format!("{} ({} J_z)", kind.label(), f.label()),
                None => kind.label().to_string(),
            };
            o.within(
                &format!(
                    "hbar={hbar} {label}: [Jz,J+] {:.1e}, [Jz,J-] {:.1e}, [J+,J-] {:.1e}",
                    r.jz_plus, r.jz_minus, r.plus_minus
                ),
                r.max_su2(),
                1e-10 * hbar,
            );
        }
    }
    o.note("bf-naive: [J+,J-] - 2hbar Jz = -2hbar^2 N Ntilde, nonzero whenever both modes are occupied".into());
    o.note("bf-corrected diagonal J_z: [J+,J-] - 2hbar Jz = -hbar^2 on |0,0> only".into());
    o
}

fn c6() -> Outcome {
    let mut o = Outcome::new();
    o.summary = "shift theorem a N^r = (1+N)^r a at cutoff 16".into();
    for r in [-0.5, 0.0, 0.5, 1.0, 2.0] {
        let s = shift_theorem_check(r, 16).unwrap();
        o.within(&format!("r={r}"), s.max_residual(), 1e-12);
    }
    o
}

fn c7() -> Outcome {
    let mut o = Outcome::new();
    o.summary = "Grassmann momenta, Hamiltonian and theta anticommutator are exact".into();
    for (hbar, omega) in [(1.0, 1.0), (1.054_571_817, 2.5), (0.3, 0.0)] {
        let d = derive_hamiltonian(&FieldPair::psi(), hbar, omega).unwrap();
        o.holds(
            &format!("hbar={hbar} omega={omega}: Pi_psi = -(i hbar/2) psibar"),
            d.momentum_field_residual().is_zero(),
        );
        o.holds(
            &format!("hbar={hbar} omega={omega}: Pi_psibar = -(i hbar/2) psi"),
            d.momentum_conjugate_residual().is_zero(),
        );
        o.holds(
            &format!("hbar={hbar} omega={omega}: H = hbar omega psibar psi"),
            d.hamiltonian_residual().is_zero(),
        );
    }
    let t = check_theta_representation().unwrap();
    o.holds(
        "{theta., d_theta} is the identity on span{1, theta}",
        t.anticommutator_is_identity(),
    );
    o.holds("(theta.)^2 = 0", t.multiply_is_nilpotent());
    o
}

fn c8() -> Outcome {
    let mut o = Outcome::new();
    o.summary =
        "ln Z closed vs trace <= 1e-9 and energy closed vs finite difference <= 1e-6 hbar omega"
            .into();
    let units = Units::default();
    for (name, mode) in [
        ("fermion", ModeSpace::fermion(1.0).unwrap()),
        ("boson D=60", ModeSpace::boson(60, 1.0).unwrap()),
    ] {
        for x in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let spec = EnsembleSpec::single(mode, x, units).unwrap();
            let r = thermo::thermal_report(&spec, thermo::DEFAULT_FD_STEP).unwrap();
            o.within(
                &format!("{name} beta*hbar*omega={x}: ln Z"),
                r.log_z_residual(),
                1e-9,
            );
            o.within(
                &format!("{name} beta*hbar*omega={x}: energy"),
                r.energy_residual(),
                1e-6,
            );
        }
    }
    let spec = EnsembleSpec::new(
        vec![
            ModeSpace::fermion(1.0).unwrap(),
            ModeSpace::fermion(2.0).unwrap(),
        ],
        1.0,
        units,
    )
    .unwrap();
    let pair = thermo::fermion_pair_energy(1.0, 2.0, 1.0, units).unwrap();
    o.within(
        "fermion pair energy equals sum of single-mode energies",
        (thermo::mean_energy(&spec).unwrap() - pair).abs(),
        1e-12,
    );
    let wide = EnsembleSpec::single(ModeSpace::boson(400, 1.0).unwrap(), 0.1, units).unwrap();
    let r = thermo::thermal_report(&wide, thermo::DEFAULT_FD_STEP).unwrap();
    o.note(format!(
        "boson at beta*hbar*omega=0.1 with cutoff 400: ln Z error {:.1e}, energy error {:.1e}; at cutoff 60 the dropped tail e^(-6) dominates",
        r.log_z_residual(),
        r.energy_residual()
    ));
    o
}

fn c9() -> Outcome {
    let mut o = Outcome::new();
    o.summary = "continuum energy closed form matches quadrature".into();
    for kt in [1.0, 0.25] {
        for eps in [2.0, 5.0, 10.0] {
            let c = thermo::continuum_energy(thermo::DEFAULT_EPS_MIN, eps, kt).unwrap();
            o.within(
                &format!(
                    "kT={kt} eps_m={eps}: closed {:.12} vs quadrature {:.12}",
                    c.closed, c.quadrature
                ),
                c.residual(),
                1e-8 * kt,
            );
            if kt == 1.0 {
                o.note(format!(
                    "eps_m={eps}: linear term (1-eps_m)/2 gives {:.12}, off by {:.6} kT",
                    c.sign_flipped,
                    c.sign_flipped_deviation()
                ));
            }
        }
    }
    o
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn c10() -> Outcome {
    let mut o = Outcome::new();
    o.summary = "rotor: I = hbar/omega, omega_rot = sqrt(2) omega, rotational Z = 1 + 3/e".into();
    for (hbar, omega) in [(1.0, 1.0), (1.0, 2.0), (0.5, 3.0)] {
        let r = thermo::rotor_equivalence(omega, HalfInt::from_twice(2), 2, hbar).unwrap();
        o.within(
            &format!("hbar={hbar} omega={omega}: I = {}", r.inertia),
            rel(r.inertia, hbar / omega),
            1e-12,
        );
        o.within(
            &format!("hbar={hbar} omega={omega}: omega_rot = {}", r.rotor_omega),
            rel(r.rotor_omega, 2f64.sqrt() * omega),
            1e-12,
        );
        let z = thermo::rotational_partition(
            r.inertia,
            1.0 / (hbar * omega),
            HalfInt::from_twice(2),
            hbar,
        )
        .unwrap();
        o.within(
            &format!("hbar={hbar} omega={omega}: Z_rot = {z}"),
            (z - (1.0 + 3.0 * (-1.0f64).exp())).abs(),
            1e-12,
        );
    }
    o
}

fn c11() -> Outcome {
    let mut o = Outcome::new();
    o.summary = "fermion Heisenberg frequency equals omega".into();
    for omega in [1.0, 0.4, 3.0] {
        let m = ModeSpace::fermion(omega).unwrap();
        let lines = thermo::spectral_frequencies(
            &hamiltonian(&m, Units::default()),
            &m.operators().lower,
            1.0,
        )
        .unwrap();
        let err = if lines.len() == 1 {
            (lines[0].frequency - omega).abs()
        } else {
            f64::INFINITY
        };
        o.within(
            &format!(
                "omega={omega}: lines {:?}",
                lines.iter().map(|l| l.frequency).collect::<Vec<_>>()
            ),
            err,
            1e-12,
        );
        let motion = conjugate_motion(&FieldPair::psi(), 1.0, omega).unwrap();
        o.note(format!(
            "omega={omega}: spectral gap {} vs classical half-rate parameter {} (not asserted)",
            lines.first().map(|l| l.frequency).unwrap_or(f64::NAN),
            rational_to_f64(&motion.half_rate_frequency.re)
        ));
    }
    o
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_schwinger"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn c12() -> Outcome {
    let mut o = Outcome::new();
    o.summary = "CLI determinism and exit codes".into();
    let (code_a, a) = run_cli(&["casimir", "--kind", "ff"]);
    let (code_b, b) = run_cli(&["casimir", "--kind", "ff"]);
    o.holds(
        "casimir --kind ff is byte-identical across runs",
        a == b && !a.is_empty(),
    );
    let text = String::from_utf8_lossy(&a);
    o.holds(
        "eigenvalues are [0,0,0.75,0.75]",
        text.contains("\"eigenvalues\":[0,0,0.75,0.75]"),
    );
    o.holds(
        &format!("casimir --kind ff exits 0 (got {code_a}, {code_b})"),
        code_a == 0 && code_b == 0,
    );
    let (code, _) = run_cli(&["verify", "--kind", "bb", "--cutoff", "8"]);
    o.holds(
        &format!("verify --kind bb --cutoff 8 exits 0 (got {code})"),
        code == 0,
    );
    let (code, _) = run_cli(&["verify", "--kind", "bf-naive"]);
    o.holds(
        &format!("verify --kind bf-naive exits 1 (got {code})"),
        code == 1,
    );
    let (code, _) = run_cli(&["casimr"]);
    o.holds(&format!("casimr exits 2 (got {code})"), code == 2);
    o
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 12] = [
        (1, c1),
        (2, c2),
        (3, c3),
        (4, c4),
        (5, c5),
        (6, c6),
        (7, c7),
        (8, c8),
        (9, c9),
        (10, c10),
        (11, c11),
        (12, c12),
    ];
    let mut failed = Vec::new();
    for (n, f) in criteria {
        let o = f();
        println!(
            "{} [{n:>2}] {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.summary
        );
        for d in &o.details {
            println!("       {d}");
        }
        if !o.passed {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 12 criteria pass");
    } else {
        println!(
            "acceptance: {} of 12 criteria fail: {failed:?}",
            failed.len()
        );
        std::process::exit(1);
    }
}
