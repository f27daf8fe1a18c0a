use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use sptgame::fermion::{Axis, AxisSolver};
use sptgame::game::{
    classical_optimum_3player, exact_win_prob, play_sampled, quantum_win_prob, sop_criterion, GameSpec,
};
use sptgame::metts::{run_metts, theorem1_observables, CollapsePolicy, MettsConfig};
use sptgame::model::{cluster_state, gibbs_density, ground_state, ModelParams, QuantumState, MAX_DENSITY_QUBITS};
use sptgame::pauli::GroupElement;
use sptgame::thermal::{critical_temperature, min_win, ThermalPoint};

use crate::error::{CliError, CliResult};
use crate::output::{num, parse_grid, parse_sizes, read_csv, write_csv, RunManifest};
use crate::{AxisArgs, ClassicalArgs, ClusterExactArgs, Common, GameArgs, MettsArgs, PhaseDiagramArgs};

pub const CLUSTER_EXACT_HEADER: [&str; 4] = ["n", "T", "P_min", "T_c"];
pub const PHASE_DIAGRAM_HEADER: [&str; 5] = ["J_X", "J_ZZ", "min_sop", "P_min", "degenerate"];
pub const AXIS_HEADER: [&str; 13] = ["axis", "J", "n", "T", "g", "h", "U_g", "U_h", "U_gh", "T_twist", "UgT", "P", "P_min"];
pub const METTS_HEADER: [&str; 10] = ["J_X", "J_ZZ", "T", "n", "observable", "mean", "stderr", "tau", "N_I", "seed"];
pub const GAME_HEADER: [&str; 8] = ["n", "source", "g", "h", "trials", "empirical", "analytic", "sigma"];

struct Run<'a> {
    command: &'static str,
    common: &'a Common,
    started: Instant,
    outputs: Vec<PathBuf>,
}

impl<'a> Run<'a> {
    fn start(command: &'static str, common: &'a Common) -> Self {
        Run { command, common, started: Instant::now(), outputs: Vec::new() }
    }

    fn dir(&self) -> &Path {
        &self.common.out
    }

    fn csv(&mut self, header: &[&str], rows: &[Vec<String>]) -> CliResult<PathBuf> {
        let path = write_csv(self.dir(), &format!("{}.csv", self.command), header, rows)?;
        self.outputs.push(path.clone());
        Ok(path)
    }

    fn finish<P: Serialize>(self, params: &P) -> CliResult<()> {
        let manifest = RunManifest {
            command: self.command.to_owned(),
            parameters: serde_json::to_value(params)?,
            seed: self.common.seed,
            version: env!("CARGO_PKG_VERSION").to_owned(),
            wall_time_seconds: self.started.elapsed().as_secs_f64(),
            outputs: self.outputs.iter().map(|p| p.display().to_string()).collect(),
        };
        let path = manifest.write(self.dir())?;
        for out in &self.outputs {
            println!("wrote {}", out.display());
        }
        println!("wrote {}", path.display());
        Ok(())
    }
}

fn spread_corners(n: usize) -> CliResult<[usize; 3]> {
    Ok(GameSpec::spread(n, GroupElement::X, GroupElement::Y)?.corners)
}

pub fn cluster_exact(args: &ClusterExactArgs) -> CliResult<()> {
    let sizes = parse_sizes(&args.n)?;
    let temps = args.temps.values()?;
    let mut run = Run::start("cluster-exact", &args.common);
    let points: Vec<(usize, f64)> = sizes.iter().flat_map(|&n| temps.iter().map(move |&t| (n, t))).collect();
    let rows = points
        .par_iter()
        .map(|&(n, t)| -> CliResult<Vec<String>> {
            let tp = ThermalPoint::at_temperature(n, t, args.delta)?;
            let tc = critical_temperature(n, args.delta)?;
            Ok(vec![n.to_string(), num(t), num(min_win(&tp)), num(tc)])
        })
        .collect::<CliResult<Vec<_>>>()?;
    let path = run.csv(&CLUSTER_EXACT_HEADER, &rows)?;
    check_cluster_monotone(&path)?;
    run.finish(args)
}

/// Re-reads the written file: `P_min` must not rise with `T` at fixed `n`, nor with `n`
/// at fixed `T`.
fn check_cluster_monotone(path: &Path) -> CliResult<()> {
    let (_, rows) = read_csv(path)?;
    let parse = |s: &str| s.parse::<f64>().map_err(|e| CliError::Internal(format!("re-read {s:?}: {e}")));
    let mut by_n: BTreeMap<usize, Vec<(f64, f64)>> = BTreeMap::new();
    let mut by_t: BTreeMap<u64, Vec<(usize, f64)>> = BTreeMap::new();
    for row in &rows {
        let n: usize = row[0].parse().map_err(|e| CliError::Internal(format!("re-read {:?}: {e}", row[0])))?;
        let (t, p) = (parse(&row[1])?, parse(&row[2])?);
        by_n.entry(n).or_default().push((t, p));
        by_t.entry(t.to_bits()).or_default().push((n, p));
    }
    let falls = |mut v: Vec<(f64, f64)>| {
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v.windows(2).all(|w| w[1].1 <= w[0].1)
    };
    for (n, v) in by_n {
        if !falls(v) {
            return Err(CliError::Internal(format!("P_min rises with temperature at n = {n}")));
        }
    }
    for (t, v) in by_t {
        if !falls(v.into_iter().map(|(n, p)| (n as f64, p)).collect()) {
            return Err(CliError::Internal(format!("P_min rises with size at T = {}", f64::from_bits(t))));
        }
    }
    Ok(())
}

pub fn phase_diagram(args: &PhaseDiagramArgs) -> CliResult<()> {
    if args.n > MAX_DENSITY_QUBITS {
        return Err(sptgame::Error::ResourceGuard { what: "dense ground state", n: args.n, max: MAX_DENSITY_QUBITS }.into());
    }
    let (jxs, jzzs) = (parse_grid(&args.jx)?, parse_grid(&args.jzz)?);
    ModelParams::new(args.n, 0.0, 0.0, args.delta)?;
    let corners = spread_corners(args.n)?;
    let mut run = Run::start("phase-diagram", &args.common);
    let points: Vec<(f64, f64)> = jxs.iter().flat_map(|&x| jzzs.iter().map(move |&z| (x, z))).collect();
    let rows = points
        .par_iter()
        .map(|&(jx, jzz)| -> CliResult<Vec<String>> {
            let gs = ground_state(&ModelParams::new(args.n, jx, jzz, args.delta)?)?;
            let c = sop_criterion(&gs.mixture(), corners)?;
            Ok(vec![num(jx), num(jzz), num(c.min_sop), num(c.p_min.value), gs.degenerate.to_string()])
        })
        .collect::<CliResult<Vec<_>>>()?;
    run.csv(&PHASE_DIAGRAM_HEADER, &rows)?;
    run.finish(args)
}

pub fn axis(args: &AxisArgs) -> CliResult<()> {
    let axis: Axis = args.axis.parse()?;
    let js = parse_grid(&args.j)?;
    let temps = args.temps.values()?;
    if args.n < 6 || args.n % 2 != 0 {
        return Err(CliError::Validation(format!("axis sweeps need an even n >= 6, got {}", args.n)));
    }
    let blocks = (1, 1 + args.n / 6);
    let mut run = Run::start("axis", &args.common);
    let per_j = js
        .par_iter()
        .map(|&j| -> CliResult<Vec<Vec<String>>> {
            let solver = AxisSolver::new(axis, j, args.n, args.delta)?;
            let mut rows = Vec::new();
            for &t in &temps {
                let c = solver.correlation(t)?;
                let sets = GroupElement::ordered_pairs()
                    .into_iter()
                    .map(|pair| Ok((pair, solver.expectation_set(&c, pair, blocks)?)))
                    .collect::<sptgame::Result<Vec<_>>>()?;
                let p_min = sets.iter().map(|(_, e)| quantum_win_prob(e)).fold(f64::INFINITY, f64::min);
                for ((g, h), e) in sets {
                    rows.push(vec![
                        axis.to_string(),
                        num(j),
                        args.n.to_string(),
                        num(t),
                        g.to_string(),
                        h.to_string(),
                        num(e.u_g),
                        num(e.u_h),
                        num(e.u_gh),
                        num(e.twisted),
                        num(e.ug_twisted),
                        num(quantum_win_prob(&e)),
                        num(p_min),
                    ]);
                }
            }
            Ok(rows)
        })
        .collect::<CliResult<Vec<_>>>()?;
    run.csv(&AXIS_HEADER, &per_j.concat())?;
    run.finish(args)
}

pub fn metts(args: &MettsArgs) -> CliResult<()> {
    let policy: CollapsePolicy = args.policy.parse()?;
    let (jxs, jzzs, temps) = (parse_grid(&args.jx)?, parse_grid(&args.jzz)?, args.temps.values()?);
    if let Some(t) = temps.iter().find(|t| **t <= 0.0) {
        return Err(CliError::Validation(format!("METTS needs positive temperatures, got {t}")));
    }
    let conserved = policy.conserved_symmetries(args.n)?;
    if !conserved.is_empty() {
        let names: Vec<String> = conserved.iter().map(|g| format!("U({g})")).collect();
        eprintln!("warning: collapse policy {policy} conserves {}; estimates stay in one symmetry sector", names.join(", "));
    }
    let observables = theorem1_observables(args.n, spread_corners(args.n)?)?;
    let mut run = Run::start("metts", &args.common);
    let mut points = Vec::new();
    for &jx in &jxs {
        for &jzz in &jzzs {
            for &t in &temps {
                points.push((jx, jzz, t));
            }
        }
    }
    let per_point = points
        .par_iter()
        .enumerate()
        .map(|(k, &(jx, jzz, t))| -> CliResult<Vec<Vec<String>>> {
            let seed = args.common.seed.wrapping_add(k as u64);
            let mut config = MettsConfig::at_temperature(t, seed)?.with_policy(policy);
            config.n_i = args.n_i;
            config.warmup = args.warmup;
            let params = ModelParams::new(args.n, jx, jzz, args.delta)?;
            let result = run_metts(&config, &params, &observables)?;
            Ok(result
                .names
                .iter()
                .zip(&result.reports)
                .map(|(name, r)| {
                    vec![
                        num(jx),
                        num(jzz),
                        num(t),
                        args.n.to_string(),
                        name.clone(),
                        num(r.mean),
                        num(r.stderr),
                        num(r.tau),
                        args.n_i.to_string(),
                        seed.to_string(),
                    ]
                })
                .collect())
        })
        .collect::<CliResult<Vec<_>>>()?;
    run.csv(&METTS_HEADER, &per_point.concat())?;
    run.finish(args)
}

pub fn game(args: &GameArgs) -> CliResult<()> {
    let params = ModelParams::new(args.n, args.jx, args.jzz, args.delta)?;
    let rows = match args.source.as_str() {
        "cluster" => game_rows(args, &cluster_state(args.n)?)?,
        "ground" => game_rows(args, &ground_state(&params)?.mixture())?,
        "thermal-dense" => game_rows(args, &gibbs_density(&params, args.temperature)?)?,
        other => {
            return Err(CliError::Validation(format!("unknown state source {other:?}, expected cluster, ground or thermal-dense")))
        }
    };
    let mut run = Run::start("game", &args.common);
    run.csv(&GAME_HEADER, &rows)?;
    run.finish(args)
}

fn game_rows<S: QuantumState>(args: &GameArgs, state: &S) -> CliResult<Vec<Vec<String>>> {
    let mut rows = Vec::new();
    for (k, (g, h)) in GroupElement::ordered_pairs().into_iter().enumerate() {
        let spec = GameSpec::spread(args.n, g, h)?;
        let sampled = play_sampled(&spec, state, args.trials, args.common.seed.wrapping_add(k as u64))?;
        let analytic = exact_win_prob(&spec, state)?;
        rows.push(vec![
            args.n.to_string(),
            args.source.clone(),
            g.to_string(),
            h.to_string(),
            args.trials.to_string(),
            num(sampled.rate),
            num(analytic),
            num(sampled.sigma),
        ]);
    }
    Ok(rows)
}

pub fn classical(args: &ClassicalArgs) -> CliResult<()> {
    let mut run = Run::start("classical", &args.common);
    let best = classical_optimum_3player();
    println!("strategies enumerated: {}", best.strategies);
    println!("optimum: {}", best.value);
    println!("optimum with input-independent b: {}", best.value_fixed_b);
    println!("strategies winning every input: {}", best.perfect);
    println!("witness responses (player, input 0, input 1):");
    for (p, r) in best.witness.responses.iter().enumerate() {
        println!("  {}: {:?} {:?}", p + 1, r[0], r[1]);
    }
    std::fs::create_dir_all(run.dir())?;
    let path = run.dir().join("classical.json");
    std::fs::write(&path, serde_json::to_string_pretty(&best)?)?;
    run.outputs.push(path);
    run.finish(args)
}
