use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use orbiconf::covering::{
    common_cover_search, covering_translations, find_coverings, lift_automorphism, project_automorphism,
    verify_covering, CommonCover, CoveringMap,
};
use orbiconf::goodbad::{self, GoodBadStatus, GoodBadVerdict, SearchOptions};
use orbiconf::graph::{menger_dot, LeviGraph};
use orbiconf::incidence::{from_mod_notation, validate, PARAMS_NOTE};
use orbiconf::io::{self, Entry, Workspace};
use orbiconf::orbi::{orbi_dual, quotient, verify_quotient_claims, Level, OrbiIncidenceStructure, Orbiconfiguration};
use orbiconf::perm::{
    automorphism_group_within, is_semiregular, orbits, subgroups, Domain, Permutation,
    PermutationGroup,
};
use orbiconf::primality::{is_prime_general, is_prime_regular, PrimalityBudget, PrimalityVerdict, PrimeStatus};
use orbiconf::rational::display;
use orbiconf::scan::levi_conjecture_scan;
use orbiconf::{Configuration, DEFAULT_GROUP_BUDGET, DEFAULT_NODE_BUDGET};

/// Configurations, their coverings and orbiconfigurations.
///
/// Exit status: 0 done, 1 invalid input, 2 a search budget ran out.
#[derive(Parser)]
#[command(name = "orbiconf", version)]
struct Cli {
    /// Print a key=value block instead of tables.
    #[arg(long, global = true)]
    machine: bool,
    /// Backtracking nodes per search.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,
    /// Largest group that will be materialised.
    #[arg(long, global = true, default_value_t = DEFAULT_GROUP_BUDGET)]
    group_budget: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the configuration axioms (or classify an orbiconfiguration).
    Validate { file: PathBuf },
    /// Print (n_s, m_t) or the weighted parameters.
    Params { file: PathBuf },
    /// Automorphism group.
    Aut { file: PathBuf },
    /// Point and line orbits of the automorphism group or of a given group.
    Orbits {
        file: PathBuf,
        #[arg(long)]
        group: Option<PathBuf>,
    },
    /// Subgroups of the automorphism group.
    Subgroups {
        file: PathBuf,
        #[arg(long)]
        max_order: Option<usize>,
    },
    /// Dual structure, written in the input's format.
    Dual { file: PathBuf },
    /// Levi graph in DOT.
    Levi { file: PathBuf },
    /// Menger graph in DOT.
    Menger { file: PathBuf },
    /// Check or search for covering maps.
    #[command(subcommand)]
    Cover(CoverCommand),
    /// Lifts of a base automorphism through a covering.
    Lift {
        #[command(flatten)]
        map: MapArgs,
        /// Base automorphism in cycle notation.
        #[arg(long, conflicts_with = "all")]
        perm: Option<String>,
        /// Try every base automorphism and count those that lift.
        #[arg(long)]
        all: bool,
    },
    /// Projection of a cover automorphism to the base.
    Project {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        perm: String,
    },
    /// A configuration covering both inputs.
    CommonCover {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = 60)]
        max_points: usize,
        /// Write the cover here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Orbit space under a group.
    Quotient {
        file: PathBuf,
        group: PathBuf,
        #[arg(long, default_value = "quotient")]
        name: String,
    },
    /// Does the configuration cover a smaller one?
    Prime {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        /// Write the witness as PREFIX.cfg and PREFIX.map.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Is the orbiconfiguration covered by a configuration?
    Goodbad {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        /// Extra candidate covers.
        #[arg(long)]
        catalog: Vec<PathBuf>,
    },
    /// Search small orbiconfigurations for equal Levi graphs.
    ConjectureScan {
        #[arg(long, default_value_t = 3)]
        max_points: usize,
    },
    /// Write a configuration from a generating rule.
    #[command(subcommand)]
    Generate(GenerateCommand),
}

#[derive(Subcommand)]
enum CoverCommand {
    /// Check a covering map file.
    Verify {
        #[command(flatten)]
        map: MapArgs,
    },
    /// Find coverings of BASE by COVER.
    Search {
        cover: PathBuf,
        base: PathBuf,
        #[arg(long, default_value_t = 1)]
        limit: usize,
    },
}

#[derive(Args)]
struct MapArgs {
    cover: PathBuf,
    base: PathBuf,
    map: PathBuf,
}

#[derive(Subcommand)]
enum GenerateCommand {
    /// Configuration from a base line taken mod n.
    Mod {
        modulus: usize,
        residues: Vec<usize>,
        #[arg(long)]
        name: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Regular,
    General,
    Both,
}

enum Failure {
    Invalid(String),
    Inconclusive,
}

impl<E: Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn invalid<T>(message: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Invalid(message.into()))
}

struct Out {
    machine: bool,
}

impl Out {
    fn field(&self, key: &str, value: impl Display) {
        if self.machine {
            println!("{key}={value}");
        } else {
            println!("{key:<20} {value}");
        }
    }

    fn text(&self, s: impl Display) {
        if !self.machine {
            println!("{s}");
        }
    }
}

struct Ctx {
    out: Out,
    node_budget: u64,
    ws: Workspace,
}

impl Ctx {
    fn load(&mut self, path: &Path) -> Result<Entry, Failure> {
        let name = self.ws.load_file(path)?;
        Ok(self.ws.get(&name).expect("just loaded").clone())
    }

    fn config(&mut self, path: &Path) -> Result<Configuration, Failure> {
        match self.load(path)? {
            Entry::Configuration(c) => Ok(c),
            _ => invalid(format!("{}: expected a configuration file", path.display())),
        }
    }

    fn aut(&self, c: &Configuration) -> Result<PermutationGroup, Failure> {
        automorphism_group_within(c, self.node_budget).map_err(|e| {
            self.out.field("status", "inconclusive");
            self.out.field("explored", e.explored);
            Failure::Inconclusive
        })
    }

    fn covering(&mut self, m: &MapArgs) -> Result<CoveringMap, Failure> {
        self.config(&m.cover)?;
        self.config(&m.base)?;
        match self.load(&m.map)? {
            Entry::Covering(cm) => Ok(cm),
            _ => invalid(format!("{}: expected a covering map file", m.map.display())),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut ctx = Ctx {
        out: Out { machine: cli.machine },
        node_budget: cli.node_budget,
        ws: Workspace::with_group_budget(cli.group_budget),
    };
    match run(&mut ctx, cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            if ctx.out.machine {
                println!("status=invalid");
                println!("error={msg}");
            }
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Inconclusive) => ExitCode::from(2),
    }
}

fn run(ctx: &mut Ctx, command: Command) -> Outcome {
    match command {
        Command::Validate { file } => validate_cmd(ctx, &file),
        Command::Params { file } => params_cmd(ctx, &file),
        Command::Aut { file } => {
            let c = ctx.config(&file)?;
            let g = ctx.aut(&c)?;
            ctx.out.field("order", g.order());
            ctx.out.field("cyclic", g.is_cyclic());
            if let Some(gen) = g.cyclic_generator() {
                ctx.out.field("cyclic_generator", gen.cycle_notation());
            }
            for gen in g.generators() {
                ctx.out.field("generator", gen.cycle_notation());
            }
            Ok(())
        }
        Command::Orbits { file, group } => {
            let c = ctx.config(&file)?;
            let g = match group {
                Some(path) => match ctx.load(&path)? {
                    Entry::Group { group, .. } => group,
                    _ => return invalid(format!("{}: expected a group file", path.display())),
                },
                None => ctx.aut(&c)?,
            };
            ctx.out.field("group_order", g.order());
            for (key, domain) in [("point_orbit", Domain::Points), ("line_orbit", Domain::Lines)] {
                for block in orbits(&g, domain).blocks {
                    ctx.out.field(key, one_based(&block));
                }
            }
            Ok(())
        }
        Command::Subgroups { file, max_order } => {
            let c = ctx.config(&file)?;
            let g = ctx.aut(&c)?;
            let list = subgroups(&g, max_order, 5_000_000);
            ctx.out.field("count", list.groups.len());
            for h in &list.groups {
                let gens: Vec<String> = h.generators().iter().map(|p| p.cycle_notation()).collect();
                let semi = if is_semiregular(h).is_ok() { " semiregular" } else { "" };
                ctx.out
                    .field("subgroup", format!("order={}{semi} generators={}", h.order(), gens.join(",")));
            }
            if !list.complete {
                ctx.out.field("status", "inconclusive");
                return Err(Failure::Inconclusive);
            }
            Ok(())
        }
        Command::Dual { file } => match ctx.load(&file)? {
            Entry::Configuration(c) => {
                let d = c.dual()?;
                print!("{}", io::write_configuration(&format!("{}-dual", stem(&file)), d.structure()));
                Ok(())
            }
            Entry::Orbi(o) => {
                let d = orbi_dual(&o)?;
                print!("{}", io::write_orbiconfiguration(&format!("{}-dual", stem(&file)), &d));
                Ok(())
            }
            _ => invalid("dual needs a configuration or orbiconfiguration file"),
        },
        Command::Levi { file } => {
            let g = match ctx.load(&file)? {
                Entry::Configuration(c) => LeviGraph::of_structure(c.structure()),
                Entry::Orbi(o) => o.levi(),
                _ => return invalid("levi needs a configuration or orbiconfiguration file"),
            };
            print!("{}", g.to_dot(&stem(&file)));
            Ok(())
        }
        Command::Menger { file } => {
            let c = ctx.config(&file)?;
            print!("{}", menger_dot(c.structure(), &stem(&file)));
            Ok(())
        }
        Command::Cover(CoverCommand::Verify { map }) => {
            let cover = ctx.config(&map.cover)?;
            let base = ctx.config(&map.base)?;
            let f = io::parse_covering(&std::fs::read_to_string(&map.map)?)
                .map_err(|e| format!("{}: {e}", map.map.display()))?;
            match verify_covering(&cover, &base, f.point_map) {
                Ok(cm) => {
                    ctx.out.field("status", "ok");
                    ctx.out.field("degree", cm.degree());
                    ctx.out.field("line_fibers_uniform", cm.line_fibers_uniform());
                    ctx.out.field("translations", covering_translations(&cm).order());
                    Ok(())
                }
                Err(e) => {
                    ctx.out.field("status", "not_a_covering");
                    invalid(e.to_string())
                }
            }
        }
        Command::Cover(CoverCommand::Search { cover, base, limit }) => {
            let cname = stem(&cover);
            let bname = stem(&base);
            let cover = ctx.config(&cover)?;
            let base = ctx.config(&base)?;
            let found = find_coverings(&cover, &base, Some(limit), ctx.node_budget).map_err(|e| {
                ctx.out.field("status", "inconclusive");
                ctx.out.field("explored", e.explored);
                Failure::Inconclusive
            })?;
            ctx.out.field("found", found.len());
            for cm in &found {
                ctx.out.field("degree", cm.degree());
                ctx.out.field("map", one_based(cm.point_map()));
                ctx.out.text(io::write_covering(&cname, &bname, cm.point_map()));
            }
            Ok(())
        }
        Command::Lift { map, perm, all } => {
            let cm = ctx.covering(&map)?;
            if all {
                let g = ctx.aut(cm.base())?;
                let lifting: Vec<&Permutation> =
                    g.elements().iter().filter(|h| !lift_automorphism(&cm, h).is_empty()).collect();
                ctx.out.field("base_automorphisms", g.order());
                ctx.out.field("lifting", lifting.len());
                for h in lifting {
                    ctx.out.field("lifts", h.cycle_notation());
                }
                return Ok(());
            }
            let Some(perm) = perm else {
                return invalid("lift needs --perm or --all");
            };
            let g = Permutation::parse(cm.base(), &perm)?;
            let lifts = lift_automorphism(&cm, &g);
            ctx.out.field("lifts", lifts.len());
            for l in &lifts {
                ctx.out.field("lift", l.cycle_notation());
            }
            Ok(())
        }
        Command::Project { map, perm } => {
            let cm = ctx.covering(&map)?;
            let f = Permutation::parse(cm.cover(), &perm)?;
            match project_automorphism(&cm, &f) {
                Some(p) => {
                    ctx.out.field("status", "ok");
                    ctx.out.field("projection", p.cycle_notation());
                    Ok(())
                }
                None => {
                    ctx.out.field("status", "does_not_project");
                    Ok(())
                }
            }
        }
        Command::CommonCover {
            first,
            second,
            max_points,
            output,
        } => {
            let a = ctx.config(&first)?;
            let b = ctx.config(&second)?;
            let result = common_cover_search(&a, &b, max_points, ctx.node_budget).map_err(|e| {
                ctx.out.field("status", "inconclusive");
                ctx.out.field("explored", e.explored);
                Failure::Inconclusive
            })?;
            match result {
                CommonCover::Found { cover, first: f1, second: f2 } => {
                    ctx.out.field("status", "found");
                    ctx.out.field("cover_params", cover.params());
                    ctx.out.field("degree_first", f1.degree());
                    ctx.out.field("degree_second", f2.degree());
                    ctx.out.field("map_first", one_based(f1.point_map()));
                    ctx.out.field("map_second", one_based(f2.point_map()));
                    let text = io::write_configuration("common-cover", cover.structure());
                    match output {
                        Some(path) => std::fs::write(path, text)?,
                        None => ctx.out.text(text),
                    }
                    Ok(())
                }
                CommonCover::NoneWithinBound { max_points, proven } => {
                    ctx.out.field("status", if proven { "none" } else { "inconclusive" });
                    ctx.out.field("max_points", max_points);
                    if proven {
                        Ok(())
                    } else {
                        Err(Failure::Inconclusive)
                    }
                }
            }
        }
        Command::Quotient { file, group, name } => {
            let c = ctx.config(&file)?;
            let g = match ctx.load(&group)? {
                Entry::Group { group, .. } => group,
                _ => return invalid(format!("{}: expected a group file", group.display())),
            };
            let q = quotient(&c, &g);
            let level = q.structure.classify();
            ctx.out.field("group_order", g.order());
            ctx.out.field("level", level.to_string().replace(' ', "_"));
            ctx.out.field("weight_gcd", q.weight_gcd);
            if !q.ambiguous_merges.is_empty() {
                ctx.out.field("ambiguous_merges", q.ambiguous_merges.len());
            }
            let claims = verify_quotient_claims(&c, &q);
            ctx.out.field("claims", if claims.all_hold() { "hold" } else { "fail" });
            for f in claims.failures() {
                ctx.out.field("claim_failure", f);
            }
            if ctx.out.machine {
                let p = q.structure.params();
                ctx.out.field("n", display(&p.n));
                ctx.out.field("m", display(&p.m));
            } else {
                print!("{}", io::write_orbiconfiguration(&name, &q.structure));
            }
            Ok(())
        }
        Command::Prime { file, method, witness } => prime_cmd(ctx, &file, method, witness),
        Command::Goodbad {
            file,
            max_degree,
            catalog,
        } => {
            let o = match ctx.load(&file)? {
                Entry::Orbi(o) => o,
                Entry::Configuration(c) => OrbiIncidenceStructure::from_configuration(&c),
                _ => return invalid("goodbad needs an orbiconfiguration file"),
            };
            let oc = Orbiconfiguration::new(o).map_err(|e| e.to_string())?;
            let catalog = catalog
                .iter()
                .map(|p| ctx.config(p))
                .collect::<Result<Vec<_>, _>>()?;
            let opts = SearchOptions {
                max_degree,
                node_budget: ctx.node_budget,
                catalog,
                generated: true,
            };
            report_goodbad(&ctx.out, &goodbad::good_search(&oc, &opts))
        }
        Command::ConjectureScan { max_points } => {
            let r = levi_conjecture_scan(max_points);
            ctx.out.field("scanned_points", r.scanned_points);
            ctx.out.field("max_weight", r.max_weight);
            ctx.out.field("structures", r.structures);
            ctx.out.field("levi_classes", r.levi_classes);
            ctx.out.field("complete", r.complete);
            match &r.counterexample {
                Some((a, b)) => {
                    ctx.out.field("status", "counterexample");
                    ctx.out.field("first", a);
                    ctx.out.field("second", b);
                    Ok(())
                }
                None if r.complete => {
                    ctx.out.field("status", "none_found");
                    Ok(())
                }
                None => {
                    ctx.out.field("status", "partial");
                    Err(Failure::Inconclusive)
                }
            }
        }
        Command::Generate(GenerateCommand::Mod {
            modulus,
            residues,
            name,
        }) => {
            let e = from_mod_notation(&residues, modulus)?;
            let name = name.unwrap_or_else(|| format!("mod{modulus}"));
            print!("{}", io::write_configuration(&name, &e.structure));
            let report = validate(&e.structure);
            if !report.is_configuration() {
                for v in report.violations() {
                    eprintln!("warning: {v}");
                }
            }
            Ok(())
        }
    }
}

fn validate_cmd(ctx: &mut Ctx, file: &Path) -> Outcome {
    let text = std::fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    if first.starts_with("orbiconfiguration") {
        let f = io::parse_orbiconfiguration(&text).map_err(|e| format!("{}: {e}", file.display()))?;
        let level = f.structure.classify();
        ctx.out.field("kind", "orbiconfiguration");
        ctx.out.field("level", level.to_string().replace(' ', "_"));
        ctx.out.field("connected", f.structure.is_connected());
        if let Some(((p, q), (j, k))) = f.structure.pair_violation() {
            ctx.out.field(
                "violation",
                format!("points {} and {} share lines {} and {}", p + 1, q + 1, j + 1, k + 1),
            );
        }
        return if level == Level::Orbiconfiguration {
            Ok(())
        } else {
            invalid("not an orbiconfiguration")
        };
    }
    let f = io::parse_configuration(&text).map_err(|e| format!("{}: {e}", file.display()))?;
    let report = validate(&f.structure);
    ctx.out.field("kind", "configuration");
    ctx.out.field("valid", report.is_configuration());
    for v in report.violations() {
        ctx.out.field("violation", v);
    }
    match &report.configuration {
        Some(c) => {
            ctx.out.field("params", c.params());
            Ok(())
        }
        None => invalid(format!("{}: not a configuration", file.display())),
    }
}

fn params_cmd(ctx: &mut Ctx, file: &Path) -> Outcome {
    match ctx.load(file)? {
        Entry::Configuration(c) => {
            let p = c.params();
            ctx.out.field("n", p.n);
            ctx.out.field("m", p.m);
            ctx.out.field("s", p.s);
            ctx.out.field("t", p.t);
            ctx.out.field("params", p);
            ctx.out.field("identity_ns_eq_mt", p.incidence_identity_holds());
            ctx.out.field("bounds_hold", p.bounds_hold());
            ctx.out.text(PARAMS_NOTE);
            Ok(())
        }
        Entry::Orbi(o) => {
            let p = o.params();
            ctx.out.field("n", display(&p.n));
            ctx.out.field("m", display(&p.m));
            let join = |v: &[orbiconf::Rational]| v.iter().map(display).collect::<Vec<_>>().join(",");
            ctx.out.field("s", join(&p.s));
            ctx.out.field("t", join(&p.t));
            ctx.out.field("level", o.classify().to_string().replace(' ', "_"));
            ctx.out
                .text("note: t(j) = sum of c(i,j); the multiplicity d(j) enters m and s only");
            Ok(())
        }
        _ => invalid("params needs a configuration or orbiconfiguration file"),
    }
}

fn prime_cmd(ctx: &mut Ctx, file: &Path, method: Method, witness: Option<PathBuf>) -> Outcome {
    let c = ctx.config(file)?;
    let budget = PrimalityBudget {
        nodes: ctx.node_budget,
        ..PrimalityBudget::default()
    };
    let regular = matches!(method, Method::Regular | Method::Both).then(|| is_prime_regular(&c, budget));
    let general = matches!(method, Method::General | Method::Both).then(|| is_prime_general(&c, ctx.node_budget));
    fn decided(v: &Option<PrimalityVerdict>, s: PrimeStatus) -> Option<&PrimalityVerdict> {
        v.as_ref().filter(|v| v.status == s)
    }
    // a witness settles it; otherwise the complete method speaks
    let main = decided(&general, PrimeStatus::NotPrime)
        .or(decided(&regular, PrimeStatus::NotPrime))
        .or(general.as_ref())
        .or(regular.as_ref())
        .expect("at least one method ran");
    let main = if main.status == PrimeStatus::Inconclusive {
        decided(&regular, PrimeStatus::Prime)
            .filter(|v| v.reason == orbiconf::primality::PrimeReason::OrderFastPath)
            .unwrap_or(main)
    } else {
        main
    };
    ctx.out.field("status", main.status);
    ctx.out.field("reason", main.reason);
    for (label, v) in [("regular", &regular), ("general", &general)] {
        if let Some(v) = v {
            ctx.out.field(&format!("{label}.status"), v.status);
            ctx.out.field(&format!("{label}.reason"), v.reason);
            ctx.out.field(&format!("{label}.explored"), v.explored);
            for line in &v.audit {
                ctx.out.text(format!("  {label}: {line}"));
            }
        }
    }
    if let (Some(r), Some(g)) = (&regular, &general) {
        let both_decided = r.status != PrimeStatus::Inconclusive && g.status != PrimeStatus::Inconclusive;
        if both_decided && r.status != g.status {
            ctx.out.field("divergence", "regular and general searches disagree");
        }
    }
    if let Some(cm) = &main.witness {
        ctx.out.field("witness.degree", cm.degree());
        ctx.out.field("witness.base", cm.base().params());
        ctx.out.field("witness.map", one_based(cm.point_map()));
        if let Some(g) = &main.witness_group {
            let gens: Vec<String> = g.generators().iter().map(|p| p.cycle_notation()).collect();
            ctx.out.field("witness.group", gens.join(","));
        }
        if let Some(prefix) = witness {
            let base_name = format!("{}-base", stem(file));
            let cfg = prefix.with_extension("cfg");
            let map = prefix.with_extension("map");
            std::fs::write(&cfg, io::write_configuration(&base_name, cm.base().structure()))?;
            std::fs::write(&map, io::write_covering(&stem(file), &base_name, cm.point_map()))?;
            ctx.out.field("witness.files", format!("{} {}", cfg.display(), map.display()));
        }
    }
    if main.status == PrimeStatus::Inconclusive {
        return Err(Failure::Inconclusive);
    }
    Ok(())
}

fn report_goodbad(out: &Out, v: &GoodBadVerdict) -> Outcome {
    out.field("status", v.status);
    if let Some(r) = &v.reason {
        out.field("reason", r);
        if let goodbad::BadReason::Integrality(f) = r {
            out.field("detail", f);
        }
    }
    if let Some(w) = &v.witness {
        out.field("witness.cover", w.cover.params());
        out.field("witness.group_order", w.group.order());
        let gens: Vec<String> = w.group.generators().iter().map(|p| p.cycle_notation()).collect();
        out.field("witness.group", gens.join(","));
        out.field("witness.point_map", one_based(&w.point_map));
        out.text(io::write_configuration("cover", w.cover.structure()));
    }
    if let Some(b) = v.bound {
        out.field("bound", b);
    }
    if v.status == GoodBadStatus::Inconclusive {
        return Err(Failure::Inconclusive);
    }
    Ok(())
}

fn one_based(v: &[usize]) -> String {
    v.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",")
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into())
}
