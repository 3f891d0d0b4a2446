//! Command dispatch and reports for the `rht` binary.
//!
//! [`run`] takes a parsed model file and returns a [`ReportDocument`]; the
//! binary only handles I/O and exit codes. Verdicts such as "not
//! extendable" are report content, not errors.

pub mod report;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rht_core::bs_model::{BsError, BsModel};
use rht_core::coalgebra::{pd_quasi_target, CoalgebraError, DualCoalgebra};
use rht_core::dsl::{DslError, ModelDocument};
use rht_core::gca::{GcaPresentation, Poly};
use rht_core::nilmanifold::{self, NilError};
use rht_core::scalar::{self, Scalar};
use rht_core::sep_symplectic::{self, SepError};

pub use report::ReportDocument;
use report::*;

/// Default cap on enumerated degrees; override with `RHT_MAX_DEGREE`.
pub const DEFAULT_MAX_DEGREE: i32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    Cohomology,
    FsModel,
    Kappa,
    Extendable,
    ModuliDim,
    NilExtendable,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Cohomology => "cohomology",
            Command::FsModel => "fsmodel",
            Command::Kappa => "kappa",
            Command::Extendable => "extendable",
            Command::ModuliDim => "moduli-dim",
            Command::NilExtendable => "nil-extendable",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flags {
    pub deg: Option<i32>,
    pub from: Option<i32>,
    pub to: Option<i32>,
    pub seed: Option<u64>,
    pub max_degree: i32,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            deg: None,
            from: None,
            to: None,
            seed: None,
            max_degree: DEFAULT_MAX_DEGREE,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad input: exit status 2.
    #[error("{0}")]
    Input(String),
    /// A broken internal invariant: exit status 1.
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<BsError> for CliError {
    fn from(e: BsError) -> Self {
        match e {
            BsError::ModelInconsistency(_) => CliError::Internal(e.to_string()),
            BsError::Coalgebra(c) => c.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<CoalgebraError> for CliError {
    fn from(e: CoalgebraError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SepError> for CliError {
    fn from(e: SepError) -> Self {
        match e {
            SepError::Bs(b) => b.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<NilError> for CliError {
    fn from(e: NilError) -> Self {
        match e {
            NilError::Bs(b) => b.into(),
            NilError::NonvanishingDelta(_) => CliError::Internal(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<DslError> for CliError {
    fn from(e: DslError) -> Self {
        match e {
            DslError::Sep(s) => s.into(),
            DslError::Nil(n) => n.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<rht_core::gca::GcaError> for CliError {
    fn from(e: rht_core::gca::GcaError) -> Self {
        CliError::Input(e.to_string())
    }
}

pub fn run(
    command: Command,
    doc: &ModelDocument,
    flags: &Flags,
) -> Result<ReportDocument, CliError> {
    let (result, criterion) = match command {
        Command::Check => (
            Payload::Check(check(doc, flags)?),
            "d² = 0, nilmanifold shape, coalgebra laws",
        ),
        Command::Cohomology => (
            Payload::Cohomology(cohomology(doc, flags)?),
            "cohomology of the model",
        ),
        Command::FsModel => (
            Payload::FsModel(fsmodel(doc)?),
            "mapping-space model of the identity component",
        ),
        Command::Kappa => (Payload::Kappa(kappa(doc)?), "κ(s_iλ) = [t_iλ ⊗ 1_*]"),
        Command::Extendable => (
            Payload::Extendable(extendable(doc)?),
            "[ω] extends iff H²(f) ∘ κ = 0",
        ),
        Command::ModuliDim => (Payload::ModuliDim(moduli_dim(doc)?), "dim W² − 2k over S²"),
        Command::NilExtendable => (
            Payload::NilExtendable(nil_extendable(doc)?),
            "[ω] extends iff H*(f) vanishes on H*(Baut₁N)",
        ),
    };
    Ok(ReportDocument {
        schema: 1,
        command: CommandEcho {
            name: command.name().to_string(),
            model: doc.name.clone(),
            flags: FlagEcho {
                deg: flags.deg,
                from: flags.from,
                to: flags.to,
                seed: flags.seed,
            },
        },
        result,
        provenance: Provenance {
            criterion: criterion.to_string(),
        },
    })
}

fn all_degree_one(doc: &ModelDocument) -> bool {
    !doc.generators.is_empty() && doc.generators.iter().all(|g| g.degree == 1)
}

/// The mapping-space model: separable when `torus` is declared, otherwise
/// nilmanifold.
fn build_model(doc: &ModelDocument) -> Result<BsModel, CliError> {
    if doc.torus.is_some() {
        Ok(doc.separable_spec()?.build_model()?)
    } else if all_degree_one(doc) {
        Ok(doc.nilmanifold()?.build_model()?)
    } else {
        Err(CliError::Input(
            "need a `torus` declaration or a model with all generators in degree 1".into(),
        ))
    }
}

fn random_poly(
    pres: &GcaPresentation,
    rng: &mut ChaCha8Rng,
    max_degree: i32,
) -> Result<(Poly, i32), CliError> {
    for _ in 0..16 {
        let n = rng.gen_range(1..=max_degree.clamp(1, 4));
        let basis = pres.basis_in_degree(n)?;
        if basis.is_empty() {
            continue;
        }
        let coords: Vec<Scalar> = (0..basis.len())
            .map(|_| scalar::ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3)))
            .collect();
        return Ok((pres.from_coordinates(&coords, &basis), n));
    }
    Ok((pres.zero(), 0))
}

fn check(doc: &ModelDocument, flags: &Flags) -> Result<CheckPayload, CliError> {
    let pres = &doc.presentation;
    let d_squared: Vec<String> = pres
        .check_d_squared()
        .into_iter()
        .map(|v| format!("d²({}) = {}", v.generator, v.value))
        .collect();
    let nil = all_degree_one(doc).then(|| {
        let order: Vec<String> = doc.generators.iter().map(|g| g.name.clone()).collect();
        nilmanifold::validate_nil(pres, &order)
    });
    let coalgebra = if doc.torus.is_some() && d_squared.is_empty() {
        let input = doc.separable_spec()?.mapping_input()?;
        Some(coalgebra_checks(&DualCoalgebra::dualize(
            &input.coefficients,
        )))
    } else if nil.as_ref().is_some_and(Vec::is_empty) {
        let input = doc.nilmanifold()?.mapping_input()?;
        Some(coalgebra_checks(&DualCoalgebra::dualize(
            &input.coefficients,
        )))
    } else {
        None
    };

    let seed = flags.seed.unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases = if pres.is_empty() { 0 } else { 100 };
    let mut failures = Vec::new();
    for case in 0..cases {
        let (a, da) = random_poly(pres, &mut rng, flags.max_degree)?;
        let (b, db) = random_poly(pres, &mut rng, flags.max_degree)?;
        let ab = pres.multiply(&a, &b)?;
        let ba = pres.multiply(&b, &a)?;
        if ab != pres.scale(&ba, &scalar::sign((da * db) as i64))? {
            failures.push(format!("case {case}: graded commutativity"));
        }
        let lhs = pres.apply_d(&ab)?;
        let rhs = pres.add(
            &pres.multiply(&pres.apply_d(&a)?, &b)?,
            &pres.scale(
                &pres.multiply(&a, &pres.apply_d(&b)?)?,
                &scalar::sign(da as i64),
            )?,
        )?;
        if lhs != rhs {
            failures.push(format!("case {case}: Leibniz rule"));
        }
        if d_squared.is_empty() && !pres.apply_d(&pres.apply_d(&a)?)?.is_zero() {
            failures.push(format!("case {case}: d² on a product"));
        }
    }
    let ok = d_squared.is_empty()
        && nil.as_ref().is_none_or(Vec::is_empty)
        && coalgebra
            .as_ref()
            .is_none_or(|c| c.coassociativity.is_empty() && c.counit.is_empty())
        && failures.is_empty();
    Ok(CheckPayload {
        ok,
        d_squared,
        nilmanifold: nil,
        coalgebra,
        random_laws: RandomLaws {
            seed,
            cases,
            failures,
        },
    })
}

fn coalgebra_checks(dual: &DualCoalgebra) -> CoalgebraChecks {
    CoalgebraChecks {
        dimension: dual.dim(),
        coassociativity: dual.check_coassociativity(),
        counit: dual.check_counit(),
    }
}

fn degree_range(flags: &Flags) -> Result<Vec<i32>, CliError> {
    let (lo, hi) = match (flags.deg, flags.from, flags.to) {
        (Some(d), None, None) => (d, d),
        (None, from, to) if from.is_some() || to.is_some() => {
            (from.unwrap_or(0), to.unwrap_or(flags.max_degree))
        }
        (None, None, None) => return Err(CliError::Input("give --deg <n> or --from/--to".into())),
        _ => {
            return Err(CliError::Input(
                "--deg cannot be combined with --from/--to".into(),
            ))
        }
    };
    if lo < 0 || lo > hi {
        return Err(CliError::Input(format!(
            "empty or negative degree range {lo}..{hi}"
        )));
    }
    if hi > flags.max_degree {
        return Err(CliError::Input(format!(
            "degree {hi} exceeds the enumeration cap {} (RHT_MAX_DEGREE)",
            flags.max_degree
        )));
    }
    Ok((lo..=hi).collect())
}

fn cohomology(doc: &ModelDocument, flags: &Flags) -> Result<CohomologyPayload, CliError> {
    let pres = &doc.presentation;
    if let Some(v) = pres.check_d_squared().first() {
        return Err(CliError::Input(format!("d² ≠ 0 on `{}`", v.generator)));
    }
    let mut groups = Vec::new();
    for n in degree_range(flags)? {
        let h = pres.cohomology(n)?;
        groups.push(GroupEntry {
            degree: n,
            dimension: h.dimension,
            representatives: h.representatives.iter().map(|p| pres.render(p)).collect(),
        });
    }
    Ok(CohomologyPayload { groups })
}

fn fsmodel(doc: &ModelDocument) -> Result<FsModelPayload, CliError> {
    let model = build_model(doc)?;
    let (m, target) = model.delta_matrix()?;
    let p = model.presentation();
    Ok(FsModelPayload {
        degree_one_basis: model
            .degree_one_basis()
            .into_iter()
            .map(String::from)
            .collect(),
        degree_two_basis: target
            .iter()
            .map(|t| {
                t.factors()
                    .iter()
                    .map(|&(g, e)| {
                        let name = &p.generator_at(g).name;
                        if e == 1 {
                            name.clone()
                        } else {
                            format!("({name})^{e}")
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(" · ")
            })
            .collect(),
        delta: render_matrix(&m),
        h1_basis: model
            .h1_aut1()?
            .classes
            .into_iter()
            .map(|c| c.name)
            .collect(),
    })
}

fn kappa(doc: &ModelDocument) -> Result<KappaPayload, CliError> {
    let spec = doc.separable_spec()?;
    let model = spec.build_model()?;
    let k = sep_symplectic::kappa(&spec, &model)?;
    Ok(KappaPayload {
        rank: k.rank(),
        image_support: k.image_support().into_iter().map(String::from).collect(),
        matrix: render_matrix(&k.matrix),
        source: k.source,
        w2_basis: k.w2_basis,
    })
}

fn require_base(doc: &ModelDocument) -> Result<(), CliError> {
    if doc.base.is_none() {
        return Err(CliError::Input(
            "this command needs a `base S2` or `basis …` declaration".into(),
        ));
    }
    Ok(())
}

fn extendable(doc: &ModelDocument) -> Result<ExtendablePayload, CliError> {
    require_base(doc)?;
    let spec = doc.separable_spec()?;
    let model = spec.build_model()?;
    let k = sep_symplectic::kappa(&spec, &model)?;
    let f = doc.classifying_data(&k.w2_basis)?;
    let v = sep_symplectic::is_extendable(&k, &f)?;
    Ok(ExtendablePayload {
        extendable: v.extendable,
        witness: witness(&v),
        w2_basis: k.w2_basis,
        base_basis: f.target_basis,
    })
}

fn moduli_dim(doc: &ModelDocument) -> Result<ModuliDimPayload, CliError> {
    let spec = doc.separable_spec()?;
    let model = spec.build_model()?;
    let d = sep_symplectic::moduli_dim_s2(&spec, &model)?;
    let closed_form = match spec.beta() {
        Some(_) if spec.k() > 0 => pd_quasi_target(spec.zpart())?
            .caps
            .first()
            .map(|(_, m)| sep_symplectic::corollary_dim_closed_form(spec.k() as u64, *m as u64)),
        _ => None,
    };
    Ok(ModuliDimPayload {
        w2_dimension: d.w2,
        torus_rank: 2 * spec.k(),
        moduli_dimension: d.moduli,
        closed_form,
    })
}

fn nil_extendable(doc: &ModelDocument) -> Result<NilExtendablePayload, CliError> {
    require_base(doc)?;
    let nil = doc.nilmanifold()?;
    let gens = nilmanifold::baut1_poly_generators(&nil.build_model()?)?;
    let values = doc.nil_values(&gens)?;
    let v = nilmanifold::is_extendable_nil(&gens, &values)?;
    Ok(NilExtendablePayload {
        extendable: v.extendable,
        witness: witness(&v),
        generators: gens.names,
        base_basis: doc.base.as_ref().map(|b| b.names()).unwrap_or_default(),
    })
}
