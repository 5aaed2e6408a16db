use crate::manifest::RunManifest;
use bccd::error::BccdError;

fn invalid(msg: impl Into<String>) -> BccdError {
    BccdError::invalid_argument(msg)
}
use bccd::graphs::text::MarkedGraph;
use bccd::scoring::{
    independence_probability, minimal_dependence_probability, structure_prior_multilevel,
    structure_prior_uniform, Dataset, DirichletPrior, Schema, StructurePrior,
};
use bccd::search::{
    adjacency_search, discover as run_discover, map_to_pag, rank_and_infer, BccdConfig,
    CausalMatrix, CausalStatus, StructurePriorKind,
};
use bccd::simgen::{
    causal_accuracy, confusion_matrix, drop_columns, pag_accuracy, random_cpts,
    random_ground_truth, sample_dataset, ExperimentManifest, GroundTruth,
};
use bccd::statements::{build_mapping as build_mapping_table, MappingTable};
use bccd::Result;
use std::path::{Path, PathBuf};

pub fn build_mapping(kmax: usize, out: &Path, dump: bool) -> Result<()> {
    let table = build_mapping_table(kmax)?;
    table.save(out)?;
    let mut manifest = RunManifest::new("build-mapping");
    manifest.push("kmax", &kmax.to_string());
    manifest.write_sidecar(out)?;
    if dump {
        let mut dump_path = out.as_os_str().to_owned();
        dump_path.push(".txt");
        std::fs::write(dump_path, table.dump_text())?;
    }
    println!("{}", table.summary());
    Ok(())
}

fn parse_dirichlet(kind: &str, ess: f64) -> Result<DirichletPrior> {
    match kind {
        "k2" => Ok(DirichletPrior::K2),
        "bdeu" => DirichletPrior::bdeu(ess),
        other => Err(invalid(format!("unknown dirichlet prior '{other}' (use k2 | bdeu)"))),
    }
}

fn parse_prior_kind(kind: &str) -> Result<StructurePriorKind> {
    match kind {
        "uniform" => Ok(StructurePriorKind::UniformPerLevel),
        "multilevel" => Ok(StructurePriorKind::Multilevel),
        other => Err(invalid(format!("unknown prior '{other}' (use uniform | multilevel)"))),
    }
}

fn load_dataset(data: &Path, schema: Option<&Path>) -> Result<Dataset> {
    let schema = match schema {
        Some(p) => Some(Schema::parse(&std::fs::read_to_string(p)?)?),
        None => None,
    };
    Dataset::from_csv_path(data, schema.as_ref())
}

/// Loads the mapping cache, rebuilding (and persisting) it when the file
/// is missing or carries an incompatible version.
fn load_or_build_mapping(path: &Path, kmax: usize) -> Result<MappingTable> {
    match MappingTable::load(path) {
        Ok(t) if t.k_max >= kmax => return Ok(t),
        Ok(t) => {
            eprintln!("note: mapping covers k_max {} < {kmax}; rebuilding", t.k_max);
        }
        Err(BccdError::VersionMismatch { expected, found }) => {
            eprintln!("note: mapping version {found:#x} != {expected:#x}; rebuilding");
        }
        Err(BccdError::Io(e)) if e.kind() == std::io::ErrorKind::NotFound => {
            eprintln!("note: mapping cache not found; building");
        }
        Err(e) => return Err(e),
    }
    let table = build_mapping_table(kmax)?;
    table.save(path)?;
    Ok(table)
}

pub struct DiscoverArgs {
    pub data: PathBuf,
    pub schema: Option<PathBuf>,
    pub theta: f64,
    pub mapping: PathBuf,
    pub out_pag: PathBuf,
    pub out_log: PathBuf,
    pub out_mc: Option<PathBuf>,
    pub kmax: usize,
    pub prior: String,
    pub dirichlet: String,
    pub bdeu_ess: f64,
    pub jobs: Option<usize>,
}

pub fn discover(args: DiscoverArgs) -> Result<()> {
    let ds = load_dataset(&args.data, args.schema.as_deref())?;
    let mapping = load_or_build_mapping(&args.mapping, args.kmax)?;
    let cfg = BccdConfig {
        theta: args.theta,
        k_max: args.kmax,
        dirichlet: parse_dirichlet(&args.dirichlet, args.bdeu_ess)?,
        structure_prior: parse_prior_kind(&args.prior)?,
        jobs: args.jobs,
    };
    let discovery = run_discover(&ds, &cfg, &mapping)?;

    let mut manifest = RunManifest::new("discover");
    manifest.push_input("data", &args.data)?;
    if let Some(schema) = &args.schema {
        manifest.push_input("schema", schema)?;
    }
    manifest.push("theta", &format!("{}", args.theta));
    manifest.push("kmax", &args.kmax.to_string());
    manifest.push("prior", &args.prior);
    manifest.push("dirichlet", &args.dirichlet);

    std::fs::write(&args.out_pag, MarkedGraph::from(&discovery.pag).to_text())?;
    manifest.write_sidecar(&args.out_pag)?;
    std::fs::write(&args.out_log, discovery.log.to_csv(ds.names()))?;
    manifest.write_sidecar(&args.out_log)?;
    if let Some(out_mc) = &args.out_mc {
        std::fs::write(out_mc, causal_matrix_csv(&discovery.causal_matrix, ds.names()))?;
        manifest.write_sidecar(out_mc)?;
    }
    println!(
        "{} variables, {} rows: skeleton {} edges, {} applied decisions",
        ds.var_count(),
        ds.row_count(),
        discovery.skeleton.edge_count(),
        discovery.log.applied().count()
    );
    Ok(())
}

fn causal_matrix_csv(mc: &CausalMatrix, names: &[String]) -> String {
    let mut out = String::from("from,to,status\n");
    for z in 0..mc.node_count() {
        for x in 0..mc.node_count() {
            if z == x {
                continue;
            }
            let status = match mc.status(z, x) {
                CausalStatus::Causes => "causes",
                CausalStatus::NotCauses => "not-causes",
                CausalStatus::Unknown => "unknown",
            };
            out.push_str(&format!("{},{},{status}\n", names[z], names[x]));
        }
    }
    out
}

fn causal_matrix_from_csv(text: &str, names: &[String]) -> Result<CausalMatrix> {
    let n = names.len();
    let mut mc = CausalMatrix::unknown(n);
    for (idx, line) in text.lines().enumerate().skip(1) {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 3 {
            return Err(BccdError::Parse { line: idx + 1, msg: format!("bad row '{line}'") });
        }
        let find = |name: &str| {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| BccdError::Parse { line: idx + 1, msg: format!("unknown variable '{name}'") })
        };
        let (z, x) = (find(parts[0])?, find(parts[1])?);
        let status = match parts[2] {
            "causes" => CausalStatus::Causes,
            "not-causes" => CausalStatus::NotCauses,
            "unknown" => CausalStatus::Unknown,
            other => {
                return Err(BccdError::Parse { line: idx + 1, msg: format!("bad status '{other}'") })
            }
        };
        mc.set_status(z, x, status);
    }
    Ok(mc)
}

pub struct TestIndependenceArgs {
    pub data: PathBuf,
    pub schema: Option<PathBuf>,
    pub x: String,
    pub y: String,
    pub given: String,
    pub minimal_dep: Option<String>,
    pub prior: String,
    pub dirichlet: String,
    pub bdeu_ess: f64,
}

pub fn test_independence(args: TestIndependenceArgs) -> Result<()> {
    let ds = load_dataset(&args.data, args.schema.as_deref())?;
    let var = |name: &str| {
        ds.var_index(name)
            .ok_or_else(|| invalid(format!("unknown variable '{name}'")))
    };
    let x = var(&args.x)?;
    let y = var(&args.y)?;
    if x == y {
        return Err(invalid("x and y must be different variables"));
    }
    let given: Vec<usize> = args
        .given
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| var(s.trim()))
        .collect::<Result<_>>()?;
    let breaker = args.minimal_dep.as_deref().map(var).transpose()?;

    let mut subset: Vec<usize> = vec![x, y];
    subset.extend(&given);
    subset.extend(breaker);
    subset.sort_unstable();
    subset.dedup();
    let level = subset.len();
    let dprior = parse_dirichlet(&args.dirichlet, args.bdeu_ess)?;
    let prior = level_prior(&args.prior, level)?;
    let structures = prior.weights.len();

    let p = match breaker {
        None => independence_probability(&ds, x, y, &given, &prior, dprior)?,
        Some(zp) => minimal_dependence_probability(&ds, x, y, &given, zp, &prior, dprior)?,
    };
    println!("{p:.6} structures={structures}");
    Ok(())
}

fn level_prior(kind: &str, level: usize) -> Result<StructurePrior> {
    match parse_prior_kind(kind)? {
        StructurePriorKind::UniformPerLevel => structure_prior_uniform(level),
        StructurePriorKind::Multilevel => {
            let family = structure_prior_multilevel(structure_prior_uniform(
                bccd::graphs::MAX_ENUM_NODES,
            )?)?;
            Ok(family[level - 1].clone())
        }
    }
}

pub fn simulate(manifest_path: &Path, out: &Path) -> Result<()> {
    let manifest = ExperimentManifest::parse(&std::fs::read_to_string(manifest_path)?)?;
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join("manifest.txt"), manifest.render())?;
    for trial in 0..manifest.trials {
        let dir = out.join(format!("trial_{trial:03}"));
        std::fs::create_dir_all(&dir)?;
        let (gt, ds) = simulate_trial(&manifest, trial)?;
        std::fs::write(dir.join("data.csv"), ds.to_csv())?;
        std::fs::write(dir.join("data.schema"), Schema::of_dataset(&ds).render())?;
        std::fs::write(dir.join("truth_dag.txt"), MarkedGraph::from(&gt.full_dag).to_text())?;
        let hidden_lines: String = gt.hidden.iter().map(|h| format!("{h}\n")).collect();
        std::fs::write(dir.join("truth_hidden.txt"), hidden_lines)?;
        std::fs::write(dir.join("truth_mag.txt"), MarkedGraph::from(&gt.true_mag).to_text())?;
        std::fs::write(dir.join("truth_pag.txt"), MarkedGraph::from(&gt.true_pag).to_text())?;
    }
    let mut run = RunManifest::new("simulate");
    run.push_input("manifest", manifest_path)?;
    run.push("seed", &manifest.seed.to_string());
    run.write_sidecar(&out.join("manifest.txt"))?;
    println!("{} trials written to {}", manifest.trials, out.display());
    Ok(())
}

/// Ground truth plus observed dataset for one trial.
pub fn simulate_trial(m: &ExperimentManifest, trial: usize) -> Result<(GroundTruth, Dataset)> {
    let seed = m.trial_seed(trial);
    let gt = random_ground_truth(m.nodes, m.hidden, m.max_degree, m.density, seed)?;
    let n_total = m.nodes + m.hidden;
    let bn = random_cpts(&gt.full_dag, &vec![2; n_total], m.alpha, seed ^ 0x5bf0_3635)?;
    let full = sample_dataset(&bn, m.rows, seed ^ 0x94d0_49bb)?;
    let ds = drop_columns(&full, &gt.hidden)?;
    Ok((gt, ds))
}

pub fn evaluate(truth_dir: &Path, pred_dir: &Path, out: &Path) -> Result<()> {
    let mut rows = String::from(
        "trial,pag_accuracy,causal_accuracy,decisions,\
         c_absent_absent,c_absent_arrow,c_absent_tail,c_absent_circle,\
         c_arrow_absent,c_arrow_arrow,c_arrow_tail,c_arrow_circle,\
         c_tail_absent,c_tail_arrow,c_tail_tail,c_tail_circle,\
         c_circle_absent,c_circle_arrow,c_circle_tail,c_circle_circle\n",
    );
    let mut trial = 0usize;
    loop {
        let tdir = truth_dir.join(format!("trial_{trial:03}"));
        let pdir = pred_dir.join(format!("trial_{trial:03}"));
        if !tdir.exists() {
            break;
        }
        if !pdir.exists() {
            return Err(invalid(format!("prediction missing for trial {trial}")));
        }
        let truth_pag = MarkedGraph::parse(&std::fs::read_to_string(tdir.join("truth_pag.txt"))?)?
            .to_pag()?;
        let truth_dag = MarkedGraph::parse(&std::fs::read_to_string(tdir.join("truth_dag.txt"))?)?
            .to_dag()?;
        let hidden: Vec<usize> = std::fs::read_to_string(tdir.join("truth_hidden.txt"))?
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.trim().parse().map_err(|_| invalid(format!("bad hidden id '{l}'"))))
            .collect::<Result<_>>()?;
        let observed = truth_dag.node_count() - hidden.len();
        let gt = rebuild_ground_truth(truth_dag, observed, hidden, truth_pag.clone())?;

        let pred_pag =
            MarkedGraph::parse(&std::fs::read_to_string(pdir.join("pag.txt"))?)?.to_pag()?;
        let names: Vec<String> = (0..observed).map(|v| format!("V{v}")).collect();
        let mc_path = pdir.join("mc.csv");
        let mc = if mc_path.exists() {
            causal_matrix_from_csv(&std::fs::read_to_string(mc_path)?, &names)?
        } else {
            CausalMatrix::unknown(observed)
        };

        let pa = pag_accuracy(&pred_pag, &gt.true_pag)?;
        let ca = causal_accuracy(&mc, &gt)?;
        let conf = confusion_matrix(&pred_pag, &gt.true_pag)?;
        rows.push_str(&format!("{trial},{pa:.6},{ca:.6},{}", mc.decided().len()));
        for r in 0..4 {
            for c in 0..4 {
                rows.push_str(&format!(",{}", conf.counts[r][c]));
            }
        }
        rows.push('\n');
        trial += 1;
    }
    if trial == 0 {
        return Err(invalid("no trial_NNN directories found under the truth dir"));
    }
    std::fs::write(out, rows)?;
    let mut run = RunManifest::new("evaluate");
    run.push("truth", &truth_dir.display().to_string());
    run.push("pred", &pred_dir.display().to_string());
    run.write_sidecar(out)?;
    println!("evaluated {trial} trials");
    Ok(())
}

fn rebuild_ground_truth(
    full_dag: bccd::graphs::Dag,
    observed: usize,
    hidden: Vec<usize>,
    true_pag: bccd::graphs::Pag,
) -> Result<GroundTruth> {
    let observed_ids: Vec<usize> = (0..observed).collect();
    let true_mag = bccd::graphs::latent_project(&full_dag, &observed_ids)?;
    Ok(GroundTruth { full_dag, observed, hidden, true_mag, true_pag })
}

pub fn sweep(
    manifest_path: &Path,
    thetas: &str,
    out: &Path,
    fix_skeleton: bool,
    mapping_path: Option<&Path>,
    jobs: Option<usize>,
) -> Result<()> {
    let manifest = ExperimentManifest::parse(&std::fs::read_to_string(manifest_path)?)?;
    let thetas: Vec<f64> = thetas
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| invalid(format!("bad theta '{s}'"))))
        .collect::<Result<_>>()?;
    if thetas.is_empty() {
        return Err(invalid("need at least one theta"));
    }
    let mapping = match mapping_path {
        Some(p) => load_or_build_mapping(p, manifest.k_max)?,
        None => build_mapping_table(manifest.k_max)?,
    };

    let mut rows = String::from("trial,theta,pag_accuracy,causal_accuracy,decisions\n");
    for trial in 0..manifest.trials {
        let (gt, ds) = simulate_trial(&manifest, trial)?;
        let base_cfg = BccdConfig {
            theta: manifest.theta,
            k_max: manifest.k_max.min(ds.var_count()),
            jobs,
            ..BccdConfig::default()
        };
        // one stage-1 pass at the manifest theta when the skeleton is fixed
        let fixed_stage1 = if fix_skeleton {
            Some(adjacency_search(&ds, &base_cfg, &mapping)?)
        } else {
            None
        };
        for &theta in &thetas {
            let (pag, mc, admitted) = match &fixed_stage1 {
                Some((skeleton, ledger)) => {
                    let (_, mc, log) = rank_and_infer(ledger, ds.var_count(), theta);
                    (map_to_pag(skeleton, &mc)?, mc, log.admitted_count())
                }
                None => {
                    let cfg = BccdConfig { theta, ..base_cfg.clone() };
                    let d = run_discover(&ds, &cfg, &mapping)?;
                    (d.pag, d.causal_matrix, d.log.admitted_count())
                }
            };
            let pa = pag_accuracy(&pag, &gt.true_pag)?;
            let ca = causal_accuracy(&mc, &gt)?;
            rows.push_str(&format!("{trial},{theta},{pa:.6},{ca:.6},{admitted}\n"));
        }
    }
    std::fs::write(out, rows)?;
    let mut run = RunManifest::new("sweep");
    run.push_input("manifest", manifest_path)?;
    run.push("fix_skeleton", &fix_skeleton.to_string());
    run.write_sidecar(out)?;
    println!("sweep complete: {} trials x {} thetas", manifest.trials, thetas.len());
    Ok(())
}
