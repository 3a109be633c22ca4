//! Input schemas and dispatch for the batch subcommands.

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use acvf_core::appendix;
use acvf_core::coding::{self, CongruenceSubgroup, GermPair};
use acvf_core::fmatrix::FMat;
use acvf_core::gammatype::{self, GammaPoint, GammaType};
use acvf_core::lattice::LatticeCode;
use acvf_core::mpoly::{MPolyRepr, PolySpace};
use acvf_core::omodule::{DualMode, ModuleDesc};
use acvf_core::ratlin::RatMat;
use acvf_core::stcomp::{self, IntegralType, MonomialType};
use acvf_core::valspace::{self, VVector};
use acvf_core::{Backend, Error, FieldElem, GammaVal, Rat};

use crate::{
    AppendixOp, Cli, CliError, CodeOp, FieldOp, GammaOp, Group, LatticeOp, ModuleOp, SepOp,
    StcompOp,
};

pub struct OpOutput {
    pub value: Value,
    pub pretty: Option<String>,
}

impl OpOutput {
    fn plain(value: Value) -> Self {
        OpOutput {
            value,
            pretty: None,
        }
    }

    fn with_pretty(value: Value, pretty: String) -> Self {
        OpOutput {
            value,
            pretty: Some(pretty),
        }
    }
}

fn parse<T: DeserializeOwned>(input: &str) -> Result<T, CliError> {
    serde_json::from_str(input).map_err(|e| CliError::Malformed(e.to_string()))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable result")
}

fn check_backend(cli: &Cli, actual: Backend) -> Result<(), CliError> {
    if let Some(flag) = cli.backend {
        let expected: Backend = flag.into();
        if expected != actual {
            return Err(CliError::Domain(Error::BackendMismatch(format!(
                "--backend {expected} but the input is over {actual}"
            ))));
        }
    }
    Ok(())
}

fn render_matrix(m: &FMat) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let cells: Vec<String> = m.row(i).iter().map(|e| e.to_string()).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn render_lattice(code: &LatticeCode) -> String {
    let gamma: Vec<String> = code.g_invariant().iter().map(Rat::to_string).collect();
    format!("U = {}, gamma = ({})", render_matrix(code.u()), gamma.join(", "))
}

pub fn dispatch(cli: &Cli, input: &str) -> Result<OpOutput, CliError> {
    match &cli.cmd {
        Group::Field { op } => field(cli, op, input),
        Group::Sep { op } => sep(cli, op, input),
        Group::Lattice { op } => lattice(cli, op, input),
        Group::Module { op } => module(cli, op, input),
        Group::Gamma { op } => gamma(cli, op, input),
        Group::Stcomp { op } => stcomp_ops(cli, op, input),
        Group::Code { op } => code(cli, op, input),
        Group::Appendix { op } => appendix_ops(cli, op, input),
    }
}

fn field(cli: &Cli, op: &FieldOp, input: &str) -> Result<OpOutput, CliError> {
    match op {
        FieldOp::Eval => {
            #[derive(Deserialize)]
            struct In {
                x: FieldElem,
            }
            let v: In = parse(input)?;
            check_backend(cli, v.x.backend())?;
            let val = v.x.val()?;
            let residue = match &val {
                GammaVal::Finite(q) if q.is_zero() => Some(v.x.residue()?),
                _ => None,
            };
            let mut out = json!({ "val": to_value(&val) });
            if let Some(r) = residue {
                out["residue"] = to_value(&r);
            }
            Ok(OpOutput::with_pretty(
                out,
                format!("val({}) = {val}", v.x),
            ))
        }
        FieldOp::Section => {
            #[derive(Deserialize)]
            struct In {
                x: FieldElem,
                cutoff: Rat,
            }
            let v: In = parse(input)?;
            check_backend(cli, v.x.backend())?;
            let s = v.x.section(&v.cutoff)?;
            Ok(OpOutput::with_pretty(
                json!({ "section": to_value(&s) }),
                s.to_string(),
            ))
        }
    }
}

fn sep(cli: &Cli, op: &SepOp, input: &str) -> Result<OpOutput, CliError> {
    match op {
        SepOp::Basis => {
            #[derive(Deserialize)]
            struct In {
                vectors: Vec<Vec<FieldElem>>,
            }
            let v: In = parse(input)?;
            if let Some(first) = v.vectors.first().and_then(|r| r.first()) {
                check_backend(cli, first.backend())?;
            }
            let family = v
                .vectors
                .into_iter()
                .map(VVector::standard)
                .collect::<acvf_core::Result<Vec<_>>>()?;
            let sep = valspace::separate(&family)?;
            Ok(OpOutput::plain(to_value(&sep)))
        }
    }
}

fn lattice(cli: &Cli, op: &LatticeOp, input: &str) -> Result<OpOutput, CliError> {
    match op {
        LatticeOp::Diag => {
            #[derive(Deserialize)]
            struct In {
                matrix: FMat,
            }
            let v: In = parse(input)?;
            check_backend(cli, v.matrix.backend())?;
            let code = LatticeCode::diagonalize(&v.matrix)?;
            Ok(OpOutput::with_pretty(to_value(&code), render_lattice(&code)))
        }
        LatticeOp::Canon => {
            #[derive(Deserialize)]
            struct In {
                lattice: LatticeCode,
            }
            let v: In = parse(input)?;
            check_backend(cli, v.lattice.backend())?;
            let code = v.lattice.canonicalize()?;
            Ok(OpOutput::with_pretty(to_value(&code), render_lattice(&code)))
        }
        LatticeOp::Eq => {
            #[derive(Deserialize)]
            struct In {
                lhs: LatticeCode,
                rhs: LatticeCode,
            }
            let v: In = parse(input)?;
            check_backend(cli, v.lhs.backend())?;
            Ok(OpOutput::plain(json!({ "equal": v.lhs.equal(&v.rhs)? })))
        }
        LatticeOp::Member => {
            #[derive(Deserialize)]
            struct In {
                lattice: LatticeCode,
                vector: Vec<FieldElem>,
            }
            let v: In = parse(input)?;
            check_backend(cli, v.lattice.backend())?;
            Ok(OpOutput::plain(json!({ "member": v.lattice.member(&v.vector)? })))
        }
        LatticeOp::Dual => {
            #[derive(Deserialize)]
            struct In {
                lattice: LatticeCode,
                mode: DualMode,
            }
            let v: In = parse(input)?;
            check_backend(cli, v.lattice.backend())?;
            Ok(OpOutput::plain(to_value(&v.lattice.dual(v.mode)?)))
        }
        LatticeOp::G => {
            #[derive(Deserialize)]
            struct In {
                lattice: LatticeCode,
            }
            let v: In = parse(input)?;
            check_backend(cli, v.lattice.backend())?;
            let g = v.lattice.canonicalize()?.g_invariant().to_vec();
            Ok(OpOutput::plain(json!({ "g": to_value(&g) })))
        }
    }
}

fn module(cli: &Cli, op: &ModuleOp, input: &str) -> Result<OpOutput, CliError> {
    #[derive(Deserialize)]
    struct WithModule {
        module: ModuleDesc,
    }
    match op {
        ModuleOp::Classify => {
            let v: WithModule = parse(input)?;
            check_backend(cli, v.module.backend())?;
            let (l, m, nprime) = v.module.classify();
            Ok(OpOutput::plain(json!({ "l": l, "m": m, "nprime": nprime })))
        }
        ModuleOp::Dual => {
            #[derive(Deserialize)]
            struct In {
                module: ModuleDesc,
                mode: DualMode,
            }
            let v: In = parse(input)?;
            check_backend(cli, v.module.backend())?;
            Ok(OpOutput::plain(to_value(&v.module.dual(v.mode)?)))
        }
        ModuleOp::Closure => {
            let v: WithModule = parse(input)?;
            check_backend(cli, v.module.backend())?;
            Ok(OpOutput::plain(to_value(&v.module.closure()?)))
        }
        ModuleOp::Pred => {
            let v: WithModule = parse(input)?;
            check_backend(cli, v.module.backend())?;
            Ok(OpOutput::plain(to_value(&v.module.predicates())))
        }
        ModuleOp::Vval => {
            #[derive(Deserialize)]
            struct In {
                module: ModuleDesc,
                vector: Vec<FieldElem>,
            }
            let v: In = parse(input)?;
            check_backend(cli, v.module.backend())?;
            let val = v.module.semilattice_val(&v.vector)?;
            Ok(OpOutput::plain(json!({ "val": to_value(&val) })))
        }
    }
}

fn gamma(_cli: &Cli, op: &GammaOp, input: &str) -> Result<OpOutput, CliError> {
    match op {
        GammaOp::Push => {
            #[derive(Deserialize)]
            struct In {
                p: GammaPoint,
                matrix: Vec<Vec<Rat>>,
                #[serde(default)]
                shift: Option<Vec<Rat>>,
            }
            let v: In = parse(input)?;
            let a = RatMat::from_rows(v.matrix);
            let c = v.shift.unwrap_or_else(|| vec![Rat::zero(); a.rows()]);
            let out = gammatype::push(&v.p, &a, &c)?;
            Ok(OpOutput::plain(to_value(&out)))
        }
        GammaOp::Product => {
            #[derive(Deserialize)]
            struct In {
                p: GammaPoint,
                q: GammaPoint,
            }
            let v: In = parse(input)?;
            let p = GammaType::from_point(&v.p);
            let q = GammaType::from_point(&v.q);
            Ok(OpOutput::plain(to_value(&gammatype::product(&p, &q))))
        }
        GammaOp::Limit => {
            #[derive(Deserialize)]
            struct In {
                p: GammaPoint,
            }
            let v: In = parse(input)?;
            let p = GammaType::from_point(&v.p);
            Ok(OpOutput::plain(json!({ "limit": to_value(&gammatype::limit(&p)) })))
        }
        GammaOp::Decompose => {
            #[derive(Deserialize)]
            struct In {
                p: GammaPoint,
            }
            let v: In = parse(input)?;
            let p = GammaType::from_point(&v.p);
            let (t, k) = gammatype::decompose(&p);
            Ok(OpOutput::plain(json!({ "T": to_value(&t.to_rows()), "k": k })))
        }
        GammaOp::Translate => {
            #[derive(Deserialize)]
            struct In {
                p: GammaPoint,
            }
            let v: In = parse(input)?;
            let (c, p0) = gammatype::translate_to_zero(&v.p)?;
            Ok(OpOutput::plain(json!({ "c": to_value(&c), "p0": to_value(&p0) })))
        }
        GammaOp::Stab => {
            #[derive(Deserialize)]
            struct In {
                r: GammaPoint,
                c: Vec<Rat>,
            }
            let v: In = parse(input)?;
            let r = GammaType::from_point(&v.r);
            Ok(OpOutput::plain(json!({ "member": gammatype::stab_member(&r, &v.c)? })))
        }
        GammaOp::Eq => {
            #[derive(Deserialize)]
            struct In {
                lhs: GammaPoint,
                rhs: GammaPoint,
            }
            let v: In = parse(input)?;
            let equal = GammaType::from_point(&v.lhs) == GammaType::from_point(&v.rhs);
            Ok(OpOutput::plain(json!({ "equal": equal })))
        }
    }
}

fn stcomp_ops(cli: &Cli, op: &StcompOp, input: &str) -> Result<OpOutput, CliError> {
    match op {
        StcompOp::Val => {
            #[derive(Deserialize)]
            struct In {
                #[serde(rename = "type")]
                ty: MonomialType,
                poly: MPolyRepr,
            }
            let v: In = parse(input)?;
            check_backend(cli, v.ty.backend())?;
            let f = v.poly.into_mpoly(v.ty.backend(), v.ty.num_vars())?;
            let val = stcomp::gauss_val(&v.ty, &f)?;
            Ok(OpOutput::plain(json!({ "val": to_value(&val) })))
        }
        StcompOp::Jd => {
            #[derive(Deserialize)]
            struct In {
                #[serde(rename = "type")]
                ty: MonomialType,
                degree: u32,
            }
            let v: In = parse(input)?;
            check_backend(cli, v.ty.backend())?;
            let code = stcomp::jd(&v.ty, v.degree)?;
            Ok(OpOutput::with_pretty(to_value(&code), render_lattice(&code)))
        }
        StcompOp::Trop => {
            #[derive(Deserialize)]
            struct In {
                module: ModuleDesc,
                space: PolySpace,
                poly: MPolyRepr,
            }
            let v: In = parse(input)?;
            check_backend(cli, v.module.backend())?;
            let f = v.poly.into_mpoly(v.module.backend(), v.space.num_vars)?;
            let b = f.coeff_vector(&v.space)?;
            let val = stcomp::trop_h(&v.module, &b)?;
            Ok(OpOutput::plain(json!({ "val": to_value(&val) })))
        }
        StcompOp::Integrate => {
            #[derive(Deserialize)]
            struct In {
                q: IntegralType,
                poly: MPolyRepr,
            }
            let v: In = parse(input)?;
            check_backend(cli, v.q.family.backend())?;
            let f = v
                .poly
                .into_mpoly(v.q.family.backend(), v.q.family.space().num_vars)?;
            let out = stcomp::integrate_val(&v.q, &f)?;
            Ok(OpOutput::plain(json!({ "point": to_value(&out) })))
        }
        StcompOp::Recover => {
            #[derive(Deserialize)]
            struct In {
                q: IntegralType,
                degree: u32,
            }
            let v: In = parse(input)?;
            check_backend(cli, v.q.family.backend())?;
            let (r2, family2) = stcomp::recover(&v.q, v.degree)?;
            Ok(OpOutput::plain(json!({
                "r2": to_value(&r2),
                "family2": to_value(&family2)
            })))
        }
    }
}

fn code(cli: &Cli, op: &CodeOp, input: &str) -> Result<OpOutput, CliError> {
    match op {
        CodeOp::Group => {
            #[derive(Deserialize)]
            struct In {
                subgroup: CongruenceSubgroup,
            }
            let v: In = parse(input)?;
            Ok(OpOutput::plain(json!({ "group": v.subgroup.is_group() })))
        }
        CodeOp::CosetEq => {
            #[derive(Deserialize)]
            struct In {
                a: FMat,
                b: FMat,
                subgroup: CongruenceSubgroup,
            }
            let v: In = parse(input)?;
            check_backend(cli, v.a.backend())?;
            Ok(OpOutput::plain(json!({
                "equal": coding::coset_equal(&v.a, &v.b, &v.subgroup)?
            })))
        }
        CodeOp::CosetCode => {
            #[derive(Deserialize)]
            struct In {
                a: FMat,
                subgroup: CongruenceSubgroup,
            }
            let v: In = parse(input)?;
            check_backend(cli, v.a.backend())?;
            let c = coding::coset_code(&v.a, &v.subgroup)?;
            Ok(OpOutput::with_pretty(json!({ "code": to_value(&c) }), render_matrix(&c)))
        }
        CodeOp::Dnu => {
            #[derive(Deserialize)]
            struct In {
                r: GammaPoint,
            }
            let v: In = parse(input)?;
            let r = GammaType::from_point(&v.r);
            Ok(OpOutput::plain(to_value(&coding::dnu(&r))))
        }
        CodeOp::GermEq => {
            #[derive(Deserialize)]
            struct In {
                p1: GermPair,
                p2: GermPair,
            }
            let v: In = parse(input)?;
            check_backend(cli, v.p1.b.backend())?;
            Ok(OpOutput::plain(json!({
                "equal": coding::germ_equiv(&v.p1, &v.p2)?
            })))
        }
    }
}

fn appendix_ops(cli: &Cli, op: &AppendixOp, input: &str) -> Result<OpOutput, CliError> {
    match op {
        AppendixOp::Member => {
            #[derive(Deserialize)]
            struct In {
                module: ModuleDesc,
                space: PolySpace,
            }
            let v: In = parse(input)?;
            check_backend(cli, v.module.backend())?;
            let verdict = appendix::appendix_member(&v.module, &v.space, cli.budget, cli.seed)?;
            Ok(OpOutput::plain(to_value(&verdict)))
        }
    }
}
