use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, Context};
use serde_json::json;

use agpir::config::{SchemeConfig, SweepConfig};
use agpir::curve::{curve_search, SearchMode};
use agpir::lincode::{sigma_profile, SigmaEntry, SIGMA_CSV_HEADER};
use agpir::lsss::{lsss_chen_cramer, SecurityMode};
use agpir::pir::{plan_scheme, verify_claims, verify_scheme, Transcript, VerifyReport};
use agpir::sweep::{rate_sweep, sweep_csv};
use agpir::{
    CurvePoint, Fe, Field, FieldSpec, Geometry, HyperellipticCurve, LinearCode, PirScheme, Poly,
    SeededRng,
};

use crate::manifest::ManifestBuilder;
use crate::{
    AuditArgs, Cli, Command, CurveCmd, Failure, FieldArgs, InfoArgs, Mode, PirCmd, PlanArgs,
    RateCmd, RunArgs, SchemeCmd, SearchArgs, SweepArgs, VerifyArgs, VerifyMode,
};

/// `println!` that exits quietly when stdout is closed early (e.g. piped to `head`).
macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        if writeln!(std::io::stdout().lock(), $($t)*).is_err() {
            std::process::exit(0);
        }
    }};
}

type Outcome = std::result::Result<(), Failure>;

pub fn run(cli: &Cli) -> Outcome {
    let view = View { pretty: cli.pretty };
    match &cli.command {
        Command::Curve(CurveCmd::Search(a)) => curve_search_cmd(a, view),
        Command::Curve(CurveCmd::Info(a)) => curve_info(a, view),
        Command::Scheme(SchemeCmd::Plan(a)) => scheme_plan(a, view),
        Command::Scheme(SchemeCmd::Verify(a)) => scheme_verify(a),
        Command::Scheme(SchemeCmd::Audit(a)) => scheme_audit(a),
        Command::Pir(PirCmd::Run(a)) => pir_run(a, view),
        Command::Rate(RateCmd::Sweep(a)) => rate_sweep_cmd(a),
    }
}

/// Console rendering of field elements.
#[derive(Clone, Copy)]
struct View {
    pretty: bool,
}

impl View {
    fn fe(&self, f: &Field, a: Fe) -> String {
        if self.pretty {
            f.pretty(a)
        } else {
            a.0.to_string()
        }
    }

    fn list(&self, f: &Field, xs: &[Fe]) -> String {
        let v: Vec<String> = xs.iter().map(|&a| self.fe(f, a)).collect();
        format!("[{}]", v.join(", "))
    }

    fn point(&self, f: &Field, p: &CurvePoint) -> String {
        match p {
            CurvePoint::Infinity => "∞".into(),
            CurvePoint::Affine { x, y } => format!("({}, {})", self.fe(f, *x), self.fe(f, *y)),
        }
    }

    fn curve(&self, c: &HyperellipticCurve) -> String {
        let f = c.field();
        if self.pretty || !f.is_binary() {
            c.describe()
        } else {
            format!(
                "y^2 + H(x)*y = F(x), F = {}, H = {}",
                self.list(f, c.f().coeffs()),
                self.list(f, c.h().coeffs())
            )
        }
    }
}

fn field_name(f: &Field) -> String {
    if f.degree() == 1 {
        format!("F_{}", f.order())
    } else {
        format!("F_2^{}", f.degree())
    }
}

fn field_from_args(a: &FieldArgs) -> anyhow::Result<Field> {
    let p = a.p.ok_or_else(|| anyhow!("--p is required"))?;
    let spec = FieldSpec {
        characteristic: p,
        extension_degree: a.m,
        modulus: a.modulus.clone(),
    };
    Ok(Field::new(&spec)?)
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_scheme_config(path: &Path) -> anyhow::Result<(String, SchemeConfig)> {
    let text = read_text(path)?;
    let cfg = SchemeConfig::parse(&text)?;
    Ok((text, cfg))
}

fn emit(out: Option<&Path>, data: &str, manifest: &ManifestBuilder) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            manifest.write(path, data)?;
        }
        None => say!("{}", data.trim_end_matches('\n')),
    }
    Ok(())
}

fn join_u32(xs: &[u32]) -> String {
    xs.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn curve_search_cmd(a: &SearchArgs, _view: View) -> Outcome {
    let field = field_from_args(&a.field)?;
    let mode = match a.mode {
        Mode::Exhaustive => SearchMode::Exhaustive,
        Mode::Random => SearchMode::Random,
    };
    let mut hits = curve_search(&field, a.genus, a.min_points, a.budget, mode, a.seed)?;
    if let Some(k) = a.limit {
        hits.truncate(k);
    }
    let mut csv = String::from("F;H;num_points;num_y_zeros\n");
    for h in &hits {
        let _ = writeln!(
            csv,
            "{};{};{};{}",
            join_u32(&h.curve.f().to_u32s()),
            join_u32(&h.curve.h().to_u32s()),
            h.num_points,
            h.num_y_zeros
        );
    }
    let manifest = ManifestBuilder::new(
        "curve search",
        None,
        json!({
            "field": field.spec(),
            "genus": a.genus,
            "min_points": a.min_points,
            "budget": a.budget,
            "mode": format!("{:?}", a.mode).to_lowercase(),
            "limit": a.limit,
        }),
        Some(a.seed),
    );
    emit(a.out.as_deref(), &csv, &manifest)?;
    if a.out.is_some() {
        say!("{} curves written", hits.len());
    }
    Ok(())
}

fn curve_info(a: &InfoArgs, view: View) -> Outcome {
    let curve = match &a.config {
        Some(path) => {
            let (_, cfg) = load_scheme_config(path)?;
            match cfg.geometry()? {
                Geometry::Curve(c) => c,
                Geometry::Line(_) => {
                    return Err(Failure::Usage(
                        "config describes the projective line".into(),
                    ))
                }
            }
        }
        None => {
            let field = field_from_args(&a.field)?;
            if a.f.is_empty() {
                return Err(Failure::Usage("--f is required without --config".into()));
            }
            let g = match a.g {
                Some(g) => g,
                None => a.f.len().saturating_sub(2) / 2,
            };
            let f = Poly::from_u32s(&field, &a.f)?;
            let h = Poly::from_u32s(&field, &a.h)?;
            HyperellipticCurve::from_parts(field, g, f, h)
        }
    };
    let f = *curve.field();
    let report = curve.validate();
    say!("curve: {}", view.curve(&curve));
    say!("field: {}", field_name(&f));
    say!("genus: {}", curve.genus());
    match &report.reason {
        None => say!("valid: yes"),
        Some(r) => say!("valid: no ({r})"),
    }
    for w in &report.warnings {
        say!("warning: {w}");
    }
    if !report.valid {
        return Err(Failure::Usage("invalid curve".into()));
    }
    say!(
        "rational points: {} (bound {})",
        curve.point_count(),
        curve.point_bound()
    );
    say!("points with y = 0: {}", curve.y_zero_points().len());
    say!(
        "x-values without points: {}",
        view.list(&f, &curve.free_x())
    );
    if a.points {
        for p in curve.points() {
            say!("  {}", view.point(&f, &p));
        }
    }
    Ok(())
}

fn describe_geometry(g: &Geometry, view: View) -> String {
    match g {
        Geometry::Line(f) => format!("projective line over {}", field_name(f)),
        Geometry::Curve(c) => format!(
            "genus {} curve {} over {}",
            c.genus(),
            view.curve(c),
            field_name(c.field())
        ),
    }
}

fn point_json(p: &CurvePoint) -> serde_json::Value {
    match p {
        CurvePoint::Infinity => json!(null),
        CurvePoint::Affine { x, y } => json!([x.0, y.0]),
    }
}

fn scheme_plan(a: &PlanArgs, view: View) -> Outcome {
    let (text, cfg) = load_scheme_config(&a.config)?;
    let scheme = plan_scheme(&cfg.plan_request()?)?;
    let p = scheme.params();
    let f = *scheme.field();
    let r = scheme.rate();
    let (num, den) = r.reduced();
    say!("geometry: {}", describe_geometry(&p.geometry, view));
    say!("X = {}, T = {}, M = {}", p.x, p.t, p.m);
    say!("L = {}, N = {}", p.l, p.n);
    say!("rate: {r}");
    say!("anchors: {}", view.list(&f, &p.gammas));
    let pts: Vec<String> = match &p.geometry {
        Geometry::Line(_) => scheme
            .points()
            .iter()
            .filter_map(|q| q.x())
            .map(|x| view.fe(&f, x))
            .collect(),
        Geometry::Curve(_) => scheme.points().iter().map(|q| view.point(&f, q)).collect(),
    };
    say!("servers: {}", pts.join(" "));
    for w in scheme.warnings() {
        say!("warning: {w}");
    }
    if let Some(out) = &a.out {
        let plan = json!({
            "field": f.spec(),
            "genus": p.genus(),
            "curve": match &p.geometry {
                Geometry::Curve(c) => serde_json::to_value(c.to_spec()).map_err(anyhow::Error::from)?,
                Geometry::Line(_) => json!(null),
            },
            "X": p.x,
            "T": p.t,
            "L": p.l,
            "M": p.m,
            "N": p.n,
            "rate_num": num,
            "rate_den": den,
            "anchors": p.gammas.iter().map(|g| g.0).collect::<Vec<_>>(),
            "points": scheme.points().iter().map(point_json).collect::<Vec<_>>(),
            "warnings": scheme.warnings(),
        });
        let data = serde_json::to_string_pretty(&plan).map_err(anyhow::Error::from)? + "\n";
        let manifest = ManifestBuilder::new("scheme plan", Some(text), json!({}), Some(cfg.seed));
        manifest.write(out, &data)?;
    }
    Ok(())
}

fn print_report(r: &VerifyReport) {
    say!("decoder rank: {}/{}", r.decoder_rank, r.n);
    say!("protocol rank: {}/{}", r.protocol_rank, r.protocol_rows);
    say!("storage security: {} (claim {})", r.x_achieved, r.x_claim);
    say!("query privacy: {} (claim {})", r.t_achieved, r.t_claim);
    if let Some((l, w)) = &r.storage_witness {
        say!(
            "storage witness: fragment {}, servers {:?}",
            l + 1,
            one_based(w)
        );
    }
    if let Some(w) = &r.query_witness {
        say!("query witness: servers {:?}", one_based(w));
    }
}

fn one_based(w: &[usize]) -> Vec<usize> {
    w.iter().map(|i| i + 1).collect()
}

fn scheme_verify(a: &VerifyArgs) -> Outcome {
    let (_, cfg) = load_scheme_config(&a.config)?;
    let scheme = plan_scheme(&cfg.plan_request()?)?;
    let mode = match a.mode {
        VerifyMode::Dual => SecurityMode::DualDistance,
        VerifyMode::Exhaustive => SecurityMode::ExhaustiveRank,
    };
    let p = scheme.params();
    let report = verify_claims(
        &scheme,
        mode,
        0,
        a.x_claim.unwrap_or(p.x),
        a.t_claim.unwrap_or(p.t),
    )?;
    print_report(&report);
    if report.passed() {
        say!("verified");
        Ok(())
    } else {
        Err(Failure::Verify("thresholds or ranks not met".into()))
    }
}

fn sigma_csv(entries: &[SigmaEntry]) -> String {
    let mut s = format!("{SIGMA_CSV_HEADER}\n");
    for e in entries {
        s.push_str(&e.csv_row());
        s.push('\n');
    }
    s
}

fn print_sigma(name: &str, entries: &[SigmaEntry]) {
    for e in entries {
        say!(
            "σ_{name}({}) = {}/{} = {:.6}",
            e.u,
            e.insecure,
            e.total,
            e.value()
        );
    }
}

/// σ(U) for `U` from `start` to `start + extra`, stopping at the first `U` over the guard.
fn sigma_range(code: &LinearCode, start: usize, extra: usize) -> anyhow::Result<Vec<SigmaEntry>> {
    let mut out = Vec::new();
    for u in start..=start + extra {
        match sigma_profile(code, u) {
            Ok(e) => out.push(e),
            Err(e) if e.is_guard() => {
                eprintln!("note: σ({u}) skipped: {e}");
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

fn scheme_audit(a: &AuditArgs) -> Outcome {
    let (text, cfg) = load_scheme_config(&a.config)?;
    let scheme = plan_scheme(&cfg.plan_request()?)?;
    let p = scheme.params();
    let f = *scheme.field();
    let extra = p.genus().max(1);
    let report = verify_scheme(&scheme, SecurityMode::DualDistance, 0)?;
    print_report(&report);

    let mut tables = Vec::new();
    if p.t > 0 {
        let code =
            LinearCode::from_spanning(f, scheme.query_noise_rows(), scheme.points().to_vec())?;
        let sigma = sigma_range(&code, p.t, extra)?;
        print_sigma("query", &sigma);
        tables.push(("sigma_query.csv", sigma));
    }
    if p.x > 0 {
        let code =
            LinearCode::from_spanning(f, scheme.storage_noise_rows(0), scheme.points().to_vec())?;
        let sigma = sigma_range(&code, p.x, extra)?;
        print_sigma("storage", &sigma);
        tables.push(("sigma_storage.csv", sigma));
    }
    if let Some(spec) = &cfg.lsss {
        let geom = cfg.geometry()?;
        let sigma = audit_lsss(&geom, spec)?;
        print_sigma("lsss", &sigma);
        tables.push(("sigma_lsss.csv", sigma));
    }
    if let Some(dir) = &a.out_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let manifest = ManifestBuilder::new("scheme audit", Some(text), json!({}), Some(cfg.seed));
        for (name, entries) in &tables {
            manifest.write(&dir.join(name), &sigma_csv(entries))?;
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verify("thresholds or ranks not met".into()))
    }
}

/// σ(U) for the configured Chen–Cramer sharing, from `T` to `T + g`.
fn audit_lsss(geom: &Geometry, spec: &agpir::config::LsssSpec) -> anyhow::Result<Vec<SigmaEntry>> {
    let f = *geom.field();
    let h = match &spec.h {
        Some(h) => h.build(&f)?,
        None => agpir::FunctionElement::y(),
    };
    let points: Vec<CurvePoint> = geom
        .affine_points()
        .into_iter()
        .filter(|p| matches!(h.eval(p, &f), Ok(v) if !v.is_zero()))
        .collect();
    let s = lsss_chen_cramer(geom, spec.t, &h, &points)?;
    sigma_range(&s.noise_code()?, spec.t, geom.genus().max(1))
}

fn parse_files(text: &str, field: &Field, m: usize, l: usize) -> anyhow::Result<Vec<Vec<Fe>>> {
    let rows: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|s| !s.is_empty() && !s.starts_with('#'))
        .collect();
    if rows.len() != m {
        return Err(anyhow!("files: expected {m} rows, found {}", rows.len()));
    }
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let vals = row
                .split(',')
                .map(|v| {
                    let n: u32 = v
                        .trim()
                        .parse()
                        .with_context(|| format!("file {}: bad value {v:?}", i + 1))?;
                    Ok(field.elem(n)?)
                })
                .collect::<anyhow::Result<Vec<Fe>>>()?;
            if vals.len() != l {
                return Err(anyhow!(
                    "file {}: expected {l} symbols, found {}",
                    i + 1,
                    vals.len()
                ));
            }
            Ok(vals)
        })
        .collect()
}

pub const TRANSCRIPT_CSV_HEADER: &str = "kind,server,x,y,file,fragment,value";

fn transcript_csv(scheme: &PirScheme, tr: &Transcript) -> String {
    let mut s = format!("{TRANSCRIPT_CSV_HEADER}\n");
    for (n, p) in scheme.points().iter().enumerate() {
        let (x, y) = p.coords().map(|(x, y)| (x.0, y.0)).unwrap_or((0, 0));
        for (m, file) in tr.storage.shares.iter().enumerate() {
            for (l, frag) in file.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "storage,{},{x},{y},{},{},{}",
                    n + 1,
                    m + 1,
                    l + 1,
                    frag[n].0
                );
            }
        }
        for (m, file) in tr.queries.queries.iter().enumerate() {
            for (l, frag) in file.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "query,{},{x},{y},{},{},{}",
                    n + 1,
                    m + 1,
                    l + 1,
                    frag[n].0
                );
            }
        }
        let _ = writeln!(s, "response,{},{x},{y},,,{}", n + 1, tr.responses[n].0);
    }
    for (l, v) in tr.decoded.iter().enumerate() {
        let _ = writeln!(s, "decoded,,,,,{},{}", l + 1, v.0);
    }
    s
}

fn pir_run(a: &RunArgs, view: View) -> Outcome {
    let (text, cfg) = load_scheme_config(&a.config)?;
    let scheme = plan_scheme(&cfg.plan_request()?)?;
    let p = scheme.params();
    let f = *scheme.field();
    if a.mu == 0 || a.mu > p.m {
        return Err(Failure::Usage(format!("--mu must be in 1..={}", p.m)));
    }
    let seed = a.seed.unwrap_or(cfg.seed);
    let mut rng = SeededRng::new(seed);
    let files = match &a.files {
        Some(path) => parse_files(&read_text(path)?, &f, p.m, p.l)?,
        None => (0..p.m).map(|_| rng.elements(&f, p.l)).collect(),
    };
    let tr = scheme.round_trip(&files, a.mu - 1, &mut rng)?;
    say!("geometry: {}", describe_geometry(&p.geometry, view));
    say!("servers: {}, files: {} of {} symbols", p.n, p.m, p.l);
    say!("rate: {}", scheme.rate());
    say!("requested file: {}", a.mu);
    say!("decoded: {}", view.list(&f, &tr.decoded));
    if let Some(out) = &a.transcript {
        let manifest = ManifestBuilder::new(
            "pir run",
            Some(text),
            json!({ "mu": a.mu, "files": a.files.as_ref().map(|p| p.display().to_string()) }),
            Some(seed),
        );
        manifest.write(out, &transcript_csv(&scheme, &tr))?;
    }
    if tr.decoded == files[a.mu - 1] {
        say!("match: yes");
        Ok(())
    } else {
        Err(Failure::Verify(
            "decoded file differs from the stored file".into(),
        ))
    }
}

fn rate_sweep_cmd(a: &SweepArgs) -> Outcome {
    let text = read_text(&a.config)?;
    let cfg = SweepConfig::parse(&text)?;
    let field = Field::new(&cfg.field)?;
    let curves = cfg.curves()?;
    if cfg.xt[0] > cfg.xt[1] {
        return Err(Failure::Usage("xt range is empty".into()));
    }
    let rows = rate_sweep(&field, &curves, cfg.xt[0]..=cfg.xt[1]);
    let manifest = ManifestBuilder::new("rate sweep", Some(text), json!({}), None);
    emit(a.out.as_deref(), &sweep_csv(&rows), &manifest)?;
    Ok(())
}
