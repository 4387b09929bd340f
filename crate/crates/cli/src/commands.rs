use serde_json::{json, Map, Value};

use schwinger_core::fock::{hamiltonian, ModeKind, ModeSpace};
use schwinger_core::grassmann::{
    check_theta_representation, conjugate_motion, derive_hamiltonian, fmt_coeff, parse_element,
    rational_to_f64, Coeff, FieldPair, Generators, Side,
};
use schwinger_core::schwinger::{
    self, build_generators, casimir, casimir_spectrum, diagonal_value, safe_projector,
    safe_projector_without_vacuum, schwinger_state, shift_theorem_check, HalfInt, JMLabel, JzForm,
    SchwingerKind,
};
use schwinger_core::thermo::{self, EnsembleSpec};
use schwinger_core::{Check, Operator, Units};

use crate::report::{num, RunReport, Table};
use crate::{
    ensemble, Cli, CliError, Command, JzFormArg, Kind, LadderOp, ModeArg, Subspace, ThermalArgs,
    VerifyKind,
};

pub(crate) fn dispatch(cli: &Cli) -> Result<RunReport, CliError> {
    let g = &cli.global;
    let units = Units {
        hbar: g.hbar,
        kb: g.kb,
    };
    match &cli.command {
        Command::Verify { kind, jz_form } => verify(*kind, *jz_form, g.cutoff.unwrap_or(8), units),
        Command::Casimir {
            kind,
            jz_form,
            subspace,
        } => casimir_cmd(*kind, *jz_form, *subspace, g.cutoff.unwrap_or(6), units),
        Command::State { j, m } => state(j, m, g.cutoff, units),
        Command::Partition(args) => thermal("partition", args, g.cutoff.unwrap_or(60), units, None),
        Command::Energy {
            thermal: args,
            eps_max,
            eps_min,
            temperature,
        } => match eps_max {
            Some(eps_max) => continuum(*eps_min, *eps_max, *temperature, units),
            None => thermal("energy", args, g.cutoff.unwrap_or(60), units, Some(())),
        },
        Command::Rotor {
            omega,
            j,
            oscillators,
            beta,
            j_max,
        } => rotor(*omega, j, *oscillators, *beta, j_max.as_deref(), units),
        Command::GrassmannDerive { names, expr, omega } => {
            grassmann(names.as_deref(), expr.as_deref(), *omega, units)
        }
        Command::ShiftCheck { r } => shift(r, g.cutoff.unwrap_or(16)),
        Command::Frequencies { mode, omega, op } => {
            frequencies(*mode, *omega, *op, g.cutoff.unwrap_or(8), units)
        }
    }
}

fn value_name<T: clap::ValueEnum>(v: T) -> String {
    v.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

fn params(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn parse_list(flag: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let values: Result<Vec<f64>, _> = text.split(',').map(|s| s.trim().parse::<f64>()).collect();
    match values {
        Ok(v) if !v.is_empty() && v.iter().all(|x| x.is_finite()) => Ok(v),
        _ => Err(CliError::usage(format!(
            "error: --{flag} expects comma-separated numbers, got {text:?}"
        ))),
    }
}

fn half_int(flag: &str, text: &str) -> Result<HalfInt, CliError> {
    text.parse::<HalfInt>().map_err(|_| {
        CliError::usage(format!(
            "error: --{flag} expects a half-integer, got {text:?}"
        ))
    })
}

fn core_kind(kind: Kind) -> SchwingerKind {
    match kind {
        Kind::Bb => SchwingerKind::BosonBoson,
        Kind::Ff => SchwingerKind::FermionFermion,
        Kind::BfNaive => SchwingerKind::BosonFermionNaive,
        Kind::BfCorrected => SchwingerKind::BosonFermionCorrected,
    }
}

fn core_form(form: Option<JzFormArg>) -> Option<JzForm> {
    form.map(|f| match f {
        JzFormArg::Projected => JzForm::Projected,
        JzFormArg::Diagonal => JzForm::Diagonal,
    })
}

fn verify(
    kind: VerifyKind,
    form: Option<JzFormArg>,
    cutoff: usize,
    units: Units,
) -> Result<RunReport, CliError> {
    let kinds: Vec<Kind> = match kind {
        VerifyKind::Bb => vec![Kind::Bb],
        VerifyKind::Ff => vec![Kind::Ff],
        VerifyKind::BfNaive => vec![Kind::BfNaive],
        VerifyKind::BfCorrected => vec![Kind::BfCorrected],
        VerifyKind::All => vec![Kind::Bb, Kind::Ff, Kind::BfNaive, Kind::BfCorrected],
    };
    if form.is_some() && !kinds.contains(&Kind::BfCorrected) {
        return Err(CliError::usage(
            "error: --jz-form only applies to bf-corrected",
        ));
    }
    let mut results = Vec::new();
    let mut checks = Vec::new();
    for k in kinds {
        let ck = core_kind(k);
        let f = if ck == SchwingerKind::BosonFermionCorrected {
            core_form(form)
        } else {
            None
        };
        let gens = build_generators(ck, cutoff, f, units.hbar)?;
        let report = schwinger::algebra_report(&gens, &safe_projector(&gens))?;
        let kind_checks = schwinger::verify(&gens)?;
        results.push(json!({
            "kind": ck.label(),
            "jz_form": gens.jz_form.map(|f| f.label()),
            "cutoff": gens.cutoff,
            "dim": gens.dim(),
            "residuals": {
                "jz_jplus": num(report.jz_plus),
                "jz_jminus": num(report.jz_minus),
                "jplus_jminus": num(report.plus_minus),
                "casimir_jz": num(report.casimir_jz),
                "casimir_jplus": num(report.casimir_plus),
            },
            "su2_closes": report.passed(),
        }));
        checks.extend(kind_checks.into_iter().map(|mut c| {
            c.name = format!("{}/{}", ck.label(), c.name);
            c
        }));
    }
    let p = params(vec![
        ("kind", json!(value_name(kind))),
        ("jz_form", json!(core_form(form).map(|f| f.label()))),
        ("cutoff", json!(cutoff)),
        ("hbar", num(units.hbar)),
    ]);
    Ok(RunReport::new(
        "verify",
        p,
        json!({ "kinds": results }),
        checks,
        None,
    ))
}

fn casimir_cmd(
    kind: Kind,
    form: Option<JzFormArg>,
    subspace: Subspace,
    cutoff: usize,
    units: Units,
) -> Result<RunReport, CliError> {
    let ck = core_kind(kind);
    let gens = build_generators(ck, cutoff, core_form(form), units.hbar)?;
    let proj = match subspace {
        Subspace::Safe => safe_projector(&gens),
        Subspace::NoVacuum => safe_projector_without_vacuum(&gens),
        Subspace::Full => Operator::identity(gens.dim()),
    };
    let j2 = casimir(&gens);
    let eigenvalues = schwinger::restricted_eigenvalues(&j2, &proj)?;
    let levels = casimir_spectrum(&gens, &proj)?;
    let h = units.hbar;
    let commute = schwinger::commutator_residual(&j2, &gens.jz, &proj)?;
    let checks = vec![
        Check::within("casimir_hermitian", j2.hermiticity_defect(), 1e-12 * h * h),
        Check::within("casimir_commutes_jz", commute, 1e-10 * h.powi(3)),
    ];
    let mut table = Table::new(&["index", "eigenvalue"]);
    for (k, &e) in eigenvalues.iter().enumerate() {
        table.push(vec![k as f64, e]);
    }
    let results = json!({
        "kind": ck.label(),
        "jz_form": gens.jz_form.map(|f| f.label()),
        "dim": gens.dim(),
        "subspace_dim": eigenvalues.len(),
        "eigenvalues": eigenvalues.iter().map(|&e| num(e)).collect::<Vec<_>>(),
        "levels": levels.iter().map(|l| json!({
            "eigenvalue": num(l.eigenvalue),
            "multiplicity": l.multiplicity,
            "j": l.j.map(|j| j.to_string()),
        })).collect::<Vec<_>>(),
        "vacuum_value": num(diagonal_value(&gens, &j2, 0, 0)),
    });
    let p = params(vec![
        ("kind", json!(ck.label())),
        ("jz_form", json!(gens.jz_form.map(|f| f.label()))),
        ("subspace", json!(value_name(subspace))),
        ("cutoff", json!(gens.cutoff)),
        ("hbar", num(h)),
    ]);
    Ok(RunReport::new("casimir", p, results, checks, Some(table)))
}

fn state(j: &str, m: &str, cutoff: Option<usize>, units: Units) -> Result<RunReport, CliError> {
    let label = JMLabel::new(half_int("j", j)?, half_int("m", m)?)?;
    let (n1, n2) = label.occupations();
    let cutoff = cutoff.unwrap_or(n1 + n2 + 2);
    let v = schwinger_state(label, cutoff)?;
    let gens = build_generators(SchwingerKind::BosonBoson, cutoff, None, units.hbar)?;
    let h = units.hbar;
    let (jf, mf) = (label.j().to_f64(), label.m().to_f64());
    let jz_v = gens.jz.apply(&v)?;
    let j2_v = casimir(&gens).apply(&v)?;
    let jz_err = (&jz_v - &v * schwinger_core::C64::new(h * mf, 0.0)).norm();
    let j2_err = (&j2_v - &v * schwinger_core::C64::new(h * h * jf * (jf + 1.0), 0.0)).norm();
    let amplitudes: Vec<Value> = (0..v.len())
        .filter(|&k| v[k].norm() > 1e-15)
        .map(|k| {
            let (a, b) = gens.labels(k);
            json!({ "n1": a, "n2": b, "re": num(v[k].re), "im": num(v[k].im) })
        })
        .collect();
    let checks = vec![
        Check::within("unit_norm", (v.norm() - 1.0).abs(), 1e-12),
        Check::within("jz_eigenvector", jz_err, 1e-10 * h),
        Check::within("casimir_eigenvector", j2_err, 1e-10 * h * h),
    ];
    let results = json!({
        "j": label.j().to_string(),
        "m": label.m().to_string(),
        "n1": n1,
        "n2": n2,
        "dim": v.len(),
        "amplitudes": amplitudes,
        "norm": num(v.norm()),
        "jz_eigenvalue": num(h * mf),
        "casimir_eigenvalue": num(h * h * jf * (jf + 1.0)),
    });
    let p = params(vec![
        ("j", json!(label.j().to_string())),
        ("m", json!(label.m().to_string())),
        ("cutoff", json!(cutoff)),
        ("hbar", num(h)),
    ]);
    Ok(RunReport::new("state", p, results, checks, None))
}

fn thermal_modes(args: &ThermalArgs, cutoff: usize) -> Result<Vec<ModeSpace>, CliError> {
    if let Some(path) = &args.ensemble {
        return ensemble::parse_ensemble_file(path)
            .map_err(|e| CliError::usage(format!("error: {}: {e}", path.display())));
    }
    Ok(vec![match args.mode {
        ModeArg::Fermion => ModeSpace::fermion(args.omega)?,
        ModeArg::Boson => ModeSpace::boson(cutoff, args.omega)?,
    }])
}

fn mode_value(m: &ModeSpace) -> Value {
    match m.kind() {
        ModeKind::Fermion => json!({ "kind": "fermion", "omega": num(m.omega()) }),
        ModeKind::Boson => {
            json!({ "kind": "boson", "omega": num(m.omega()), "cutoff": m.cutoff() })
        }
    }
}

/// `energy` is `Some` for the energy command, which checks the
/// finite-difference oracle instead of the partition function.
fn thermal(
    command: &str,
    args: &ThermalArgs,
    cutoff: usize,
    units: Units,
    energy: Option<()>,
) -> Result<RunReport, CliError> {
    let modes = thermal_modes(args, cutoff)?;
    let betas = parse_list("beta", &args.beta)?;
    let scale = modes
        .iter()
        .map(|m| units.hbar * m.omega())
        .fold(0.0, f64::max);
    let mut table = Table::new(&[
        "beta",
        "logZ_closed",
        "logZ_trace",
        "energy_closed",
        "energy_fd",
    ]);
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for &beta in &betas {
        let spec = EnsembleSpec::new(modes.clone(), beta, units)?;
        let r = thermo::thermal_report(&spec, args.delta)?;
        table.push(vec![
            beta,
            r.log_z_closed,
            r.log_z_trace,
            r.energy_closed,
            r.energy_fd,
        ]);
        if energy.is_some() {
            checks.push(Check::within(
                format!("energy_closed_vs_fd[beta={beta}]"),
                r.energy_residual(),
                1e-6 * scale,
            ));
        } else {
            checks.push(Check::within(
                format!("logZ_closed_vs_trace[beta={beta}]"),
                r.log_z_residual(),
                1e-9,
            ));
        }
        rows.push(json!({
            "beta": num(beta),
            "logZ_closed": num(r.log_z_closed),
            "logZ_trace": num(r.log_z_trace),
            "energy_closed": num(r.energy_closed),
            "energy_fd": num(r.energy_fd),
            "logZ_residual": num(r.log_z_residual()),
            "energy_residual": num(r.energy_residual()),
        }));
    }
    let p = params(vec![
        (
            "modes",
            Value::Array(modes.iter().map(mode_value).collect()),
        ),
        (
            "beta",
            Value::Array(betas.iter().map(|&b| num(b)).collect()),
        ),
        ("delta", num(args.delta)),
        ("hbar", num(units.hbar)),
    ]);
    Ok(RunReport::new(
        command,
        p,
        json!({ "rows": rows }),
        checks,
        Some(table),
    ))
}

fn continuum(
    eps_min: f64,
    eps_max: f64,
    temperature: f64,
    units: Units,
) -> Result<RunReport, CliError> {
    let kt = units.kb * temperature;
    let c = thermo::continuum_energy(eps_min, eps_max, kt)?;
    let checks = vec![Check::within(
        "continuum_closed_vs_quadrature",
        c.residual(),
        1e-8 * kt,
    )];
    let mut table = Table::new(&["eps_max", "closed", "quadrature", "sign_flipped"]);
    table.push(vec![eps_max, c.closed, c.quadrature, c.sign_flipped]);
    let results = json!({
        "closed": num(c.closed),
        "quadrature": num(c.quadrature),
        "quadrature_error_estimate": num(c.quadrature_error_estimate),
        "residual": num(c.residual()),
        "sign_flipped": num(c.sign_flipped),
        "sign_flipped_deviation": num(c.sign_flipped_deviation()),
    });
    let p = params(vec![
        ("eps_min", num(eps_min)),
        ("eps_max", num(eps_max)),
        ("temperature", num(temperature)),
        ("kB", num(units.kb)),
    ]);
    Ok(RunReport::new("energy", p, results, checks, Some(table)))
}

fn rotor(
    omega: f64,
    j: &str,
    oscillators: usize,
    beta: Option<f64>,
    j_max: Option<&str>,
    units: Units,
) -> Result<RunReport, CliError> {
    let j = half_int("j", j)?;
    let r = thermo::rotor_equivalence(omega, j, oscillators, units.hbar)?;
    let h = units.hbar;
    let checks = vec![
        Check::exact("inertia_positive", r.inertia > 0.0),
        Check::exact("rotor_omega_positive", r.rotor_omega > 0.0),
    ];
    let mut results = json!({
        "inertia": num(r.inertia),
        "inertia_in_hbar_over_omega": num(r.inertia * omega / h),
        "rotor_omega": num(r.rotor_omega),
        "rotor_omega_over_omega": num(r.rotor_omega / omega),
        "j": r.j_used.to_string(),
        "rotational_energy": num(r.rotational_energy),
        "convention_note": r.convention_note,
    });
    let j_max = match j_max {
        Some(s) => half_int("j-max", s)?,
        None => j,
    };
    if let Some(beta) = beta {
        let z = thermo::rotational_partition(r.inertia, beta, j_max, h)?;
        let pair_energy = thermo::fermion_pair_energy(omega, omega, beta, units)?;
        let pair = match thermo::fermion_pair_inertia(pair_energy, j, h) {
            Ok(i) => json!({ "energy": num(pair_energy), "inertia": num(i) }),
            Err(e) => json!({ "energy": num(pair_energy), "refused": e.to_string() }),
        };
        let m = results.as_object_mut().expect("object");
        m.insert("rotational_partition".into(), num(z));
        m.insert("fermion_pair".into(), pair);
    }
    let p = params(vec![
        ("omega", num(omega)),
        ("j", json!(j.to_string())),
        ("oscillators", json!(oscillators)),
        ("beta", beta.map(num).unwrap_or(Value::Null)),
        ("j_max", json!(j_max.to_string())),
        ("hbar", num(h)),
    ]);
    Ok(RunReport::new("rotor", p, results, checks, None))
}

fn coeff_value(c: &Coeff) -> Value {
    json!({ "exact": fmt_coeff(c), "re": num(rational_to_f64(&c.re)), "im": num(rational_to_f64(&c.im)) })
}

fn matrix_value(m: &[[Coeff; 2]; 2]) -> Value {
    Value::Array(
        m.iter()
            .map(|row| json!(row.iter().map(fmt_coeff).collect::<Vec<_>>()))
            .collect(),
    )
}

fn grassmann(
    names: Option<&str>,
    expr: Option<&str>,
    omega: f64,
    units: Units,
) -> Result<RunReport, CliError> {
    let split = |s: &str| {
        s.split(',')
            .map(|n| n.trim().to_string())
            .collect::<Vec<_>>()
    };
    if let Some(expr) = expr {
        let names = split(names.unwrap_or("psi,psibar,psidot,psibardot"));
        let gens = Generators::new(&names)?;
        let e = parse_element(expr, &gens)?;
        let derivatives: Vec<Value> = names
            .iter()
            .map(|n| {
                Ok(json!({
                    "generator": n,
                    "left": e.derivative(n, Side::Left)?.to_string(),
                    "right": e.derivative(n, Side::Right)?.to_string(),
                }))
            })
            .collect::<Result<_, schwinger_core::Error>>()?;
        let results = json!({ "canonical": e.to_string(), "derivatives": derivatives });
        let p = params(vec![("names", json!(names)), ("expr", json!(expr))]);
        return Ok(RunReport::new("grassmann-derive", p, results, vec![], None));
    }
    let names = split(names.unwrap_or("psi,psibar"));
    let [field, conj] = names.as_slice() else {
        return Err(CliError::usage(
            "error: --names expects exactly two names (field,conjugate) without --expr",
        ));
    };
    let pair = FieldPair::new(field, conj);
    let d = derive_hamiltonian(&pair, units.hbar, omega)?;
    let motion = conjugate_motion(&pair, units.hbar, omega)?;
    let theta = check_theta_representation()?;
    let fermion = ModeSpace::fermion(1.0)?.operators();
    let exact = |name: &str, residual: &schwinger_core::grassmann::GrassmannElement| {
        Check::exact(name, residual.is_zero())
    };
    let checks = vec![
        exact("momentum_field_exact", &d.momentum_field_residual()),
        exact("momentum_conjugate_exact", &d.momentum_conjugate_residual()),
        exact("hamiltonian_exact", &d.hamiltonian_residual()),
        exact(
            "hamiltonian_commutator_form_exact",
            &d.commutator_form.sub(&d.expected_hamiltonian)?,
        ),
        Check::exact(
            "theta_anticommutator_identity",
            theta.anticommutator_is_identity(),
        ),
        Check::exact("theta_multiply_nilpotent", theta.multiply_is_nilpotent()),
        Check::exact(
            "theta_multiply_is_fermion_raise",
            theta.multiply_operator() == fermion.raise,
        ),
        Check::exact(
            "theta_derivative_is_fermion_lower",
            theta.derivative_operator() == fermion.lower,
        ),
    ];
    let results = json!({
        "generators": d.lagrangian.generators().names(),
        "lagrangian": d.lagrangian.to_string(),
        "momentum_field": d.momentum_field.to_string(),
        "momentum_conjugate": d.momentum_conjugate.to_string(),
        "hamiltonian": d.hamiltonian.to_string(),
        "expected_hamiltonian": d.expected_hamiltonian.to_string(),
        "legendre_ordering": d.ordering,
        "equation_of_motion": motion.equation.to_string(),
        "conjugate_rate": coeff_value(&motion.rate),
        "half_rate_frequency": coeff_value(&motion.half_rate_frequency),
        "theta": {
            "multiply": matrix_value(&theta.multiply),
            "derivative": matrix_value(&theta.derivative),
            "anticommutator": matrix_value(&theta.anticommutator),
        },
    });
    let p = params(vec![
        ("names", json!(names)),
        ("omega", num(omega)),
        ("hbar", num(units.hbar)),
    ]);
    Ok(RunReport::new("grassmann-derive", p, results, checks, None))
}

fn shift(r: &str, cutoff: usize) -> Result<RunReport, CliError> {
    let rs = parse_list("r", r)?;
    let mut table = Table::new(&["r", "lowering_residual", "raising_residual"]);
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for &r in &rs {
        let s = shift_theorem_check(r, cutoff)?;
        table.push(vec![r, s.lowering_residual, s.raising_residual]);
        checks.push(Check::within(
            format!("shift_theorem[r={r}]"),
            s.max_residual(),
            1e-12,
        ));
        rows.push(json!({
            "r": num(r),
            "lowering_residual": num(s.lowering_residual),
            "raising_residual": num(s.raising_residual),
        }));
    }
    let p = params(vec![
        ("r", Value::Array(rs.iter().map(|&x| num(x)).collect())),
        ("cutoff", json!(cutoff)),
    ]);
    Ok(RunReport::new(
        "shift-check",
        p,
        json!({ "rows": rows }),
        checks,
        Some(table),
    ))
}

fn frequencies(
    mode: ModeArg,
    omega: f64,
    op: LadderOp,
    cutoff: usize,
    units: Units,
) -> Result<RunReport, CliError> {
    let space = match mode {
        ModeArg::Fermion => ModeSpace::fermion(omega)?,
        ModeArg::Boson => ModeSpace::boson(cutoff, omega)?,
    };
    let ops = space.operators();
    let (o, expected) = match op {
        LadderOp::Lower => (&ops.lower, omega),
        LadderOp::Raise => (&ops.raise, -omega),
        LadderOp::Number => (&ops.number, 0.0),
    };
    let lines = thermo::spectral_frequencies(&hamiltonian(&space, units), o, units.hbar)?;
    let worst = lines
        .iter()
        .map(|l| (l.frequency - expected).abs())
        .fold(0.0, f64::max);
    let checks = vec![
        Check::exact("single_frequency", lines.len() == 1),
        Check::within(
            "frequency_matches_level_spacing",
            worst,
            1e-12 * omega.max(1.0),
        ),
    ];
    let mut results = json!({
        "lines": lines.iter().map(|l| json!({ "frequency": num(l.frequency), "weight": num(l.weight) })).collect::<Vec<_>>(),
        "expected_frequency": num(expected),
    });
    if mode == ModeArg::Fermion {
        let motion = conjugate_motion(&FieldPair::psi(), units.hbar, omega)?;
        let lagrangian = rational_to_f64(&motion.half_rate_frequency.re);
        results.as_object_mut().expect("object").insert(
            "comparison".into(),
            json!({
                "spectral_gap_frequency": num(omega),
                "lagrangian_half_rate_frequency": num(lagrangian),
                "ratio": num(lagrangian / omega),
                "note": "the Hamiltonian level spacing gives omega; writing the classical solution as exp(2i*w*t) gives w = omega/2",
            }),
        );
    }
    let p = params(vec![
        ("mode", json!(value_name(mode))),
        ("omega", num(omega)),
        ("op", json!(value_name(op))),
        ("cutoff", json!(space.cutoff())),
        ("hbar", num(units.hbar)),
    ]);
    Ok(RunReport::new("frequencies", p, results, checks, None))
}
