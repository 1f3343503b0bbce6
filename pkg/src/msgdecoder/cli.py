"""Command-line entry point.

Settings come from flags, optionally seeded by an INI file given to the
top-level ``--config`` option.  Each INI section is named after a command
(``[decode]``, ``[sweep]``, ...) and holds that command's option names; a
``[common]`` section applies to every command that has the option.  Unknown
sections or keys are rejected before anything runs.

Exit codes: 0 success, 1 runtime failure (including failed checks), 2 bad
configuration.
"""

from __future__ import annotations

import configparser
import json
import os
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .binary_messages import AsepParams, density_profile_1d, density_profile_2d
from .clusters import ClusterParams, build_hierarchy, isolated_hierarchy, level_rates
from .decoder import (
    TIMEOUT,
    DecoderParams,
    DecoderState,
    Rule,
    compute_syndrome,
    dump_frames,
    logical_class_of,
    run_until_clean,
)
from .experiments import (
    Criterion,
    ExperimentConfig,
    MessageInit,
    ScanCell,
    ScanResult,
    campaign_csv,
    config_hash,
    crossings_from_curves,
    erosion_trial,
    estimate_plog,
    write_manifest,
    write_text,
)
from .lattice import Boundary, Geometry, Norm
from .noise import NoiseSpec, fractal_pattern, load_pattern, sample
from .rng import DEFAULT_SEED_ENV, default_seed, stream
from .scheduler import SchedulerKind, SchedulerSpec, check_faithful, run_marching, run_uncoordinated

COMMON = "common"


class ConfigError(click.UsageError):
    """Bad configuration; click maps usage errors to exit status 2."""


# -- parsing helpers ---------------------------------------------------------------


def parse_noise(text: str, p: float | None, dim: int, L: int, boundary: Boundary) -> tuple[NoiseSpec, dict]:
    """Noise option syntax: ``kind[:key=value,...]``.

    kinds: ``iid``, ``local`` (corr), ``fractal`` (n, k: the deterministic
    fractal pattern), ``fractal-channel`` (n, p), ``block`` (n, beta, p) and
    ``file`` (path to a list of link indices).
    """
    kind, _, rest = text.partition(":")
    opts = {}
    for item in filter(None, rest.split(",")):
        k, eq, val = item.partition("=")
        if not eq:
            raise ConfigError(f"noise option {item!r} is not key=value")
        opts[k.strip()] = val.strip()

    def take(name, cast, default=None):
        if name in opts:
            try:
                return cast(opts.pop(name))
            except ValueError as exc:
                raise ConfigError(f"bad noise option {name}: {exc}") from None
        if default is None:
            raise ConfigError(f"noise kind {kind!r} needs {name}=")
        return default

    prob = take("p", float, p if p is not None else 0.0) if kind not in ("fractal", "file") else None
    try:
        if kind == "iid":
            spec = NoiseSpec.iid(prob)
        elif kind == "local":
            spec = NoiseSpec.local(prob, take("corr", int))
        elif kind == "fractal-channel":
            spec = NoiseSpec.fractal(prob, take("n", int))
        elif kind == "block":
            spec = NoiseSpec.block_fractal(prob, take("n", int), take("beta", float))
        elif kind == "fractal":
            n = take("n", int)
            k = take("k", int, n - 1)
            g = Geometry(dim, L, boundary)
            spec = NoiseSpec.explicit(fractal_pattern(n, k, L, g).support)
        elif kind == "file":
            spec = NoiseSpec.explicit(load_pattern(take("path", str)))
        else:
            raise ConfigError(f"unknown noise kind {kind!r}")
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if opts:
        raise ConfigError(f"unknown noise options: {', '.join(sorted(opts))}")
    return spec, {"noise": text}


def parse_list(text: str, cast, name: str) -> list:
    items = [x for x in (s.strip() for s in str(text).split(",")) if x]
    if not items:
        raise ConfigError(f"{name} is empty")
    try:
        return [cast(x) for x in items]
    except ValueError as exc:
        raise ConfigError(f"bad {name}: {exc}") from None


def load_ini(path: str, commands: dict[str, click.Command]) -> dict:
    """default_map for click built from an INI file, rejecting unknown sections and keys."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = lambda s: s.strip().replace("-", "_")
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    known = {name: {p.name for p in cmd.params if p.name} for name, cmd in commands.items()}
    all_keys = set().union(*known.values())
    out: dict[str, dict] = {}
    for section in cp.sections():
        keys = dict(cp.items(section))
        if section == COMMON:
            bad = set(keys) - all_keys
        elif section in known:
            bad = set(keys) - known[section]
        else:
            raise ConfigError(f"unknown config section [{section}]")
        if bad:
            raise ConfigError(f"unknown keys in [{section}]: {', '.join(sorted(bad))}")
    common = dict(cp.items(COMMON)) if cp.has_section(COMMON) else {}
    for name in commands:
        merged = {k: v for k, v in common.items() if k in known[name]}
        if cp.has_section(name):
            merged.update(cp.items(name))
        if merged:
            out[name] = merged
    return out


def emit(doc: dict):
    click.echo(json.dumps(doc, indent=2, sort_keys=True, default=_default))


def _default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if hasattr(o, "value"):
        return o.value
    raise TypeError(type(o).__name__)


# -- shared options -------------------------------------------------------------------


def decoder_options(f):
    opts = [
        click.option("--v", "v", type=int, default=3, show_default=True, help="Message micro-steps per feedback step."),
        click.option("--m-max", type=int, default=None, help="Message cap (default L)."),
        click.option("--eps", type=float, default=0.0, show_default=True, help="Random move probability."),
        click.option("--kick", type=int, default=0, show_default=True, help="Random kick period (0 = off)."),
        click.option("--rule", type=click.Choice([r.value for r in Rule]), default="standard", show_default=True),
        click.option("--scheduler", type=click.Choice([k.value for k in SchedulerKind]), default="sync",
                     show_default=True),
        click.option("--mu", type=float, default=1.0, show_default=True, help="Mean clock period (async)."),
        click.option("--t-max", type=int, default=None, help="Step budget (default 64 L)."),
    ]
    for o in reversed(opts):
        f = o(f)
    return f


def seed_option(f):
    return click.option("--seed", type=int, default=None,
                        help=f"Master seed (default ${DEFAULT_SEED_ENV} or 12345).")(f)


def out_option(f):
    return click.option("--out", type=click.Path(file_okay=False), default="msgdecoder-out", show_default=True)(f)


def make_params(v, m_max, eps, kick, rule) -> DecoderParams:
    try:
        return DecoderParams(v=v, m_max=m_max, epsilon_random=eps, u_kick=kick, rule=Rule(rule))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def make_geometry(dim, L, boundary) -> Geometry:
    try:
        return Geometry(dim, L, Boundary(boundary))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


# -- the group ----------------------------------------------------------------------


class Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except (click.ClickException, click.exceptions.Exit, click.Abort, SystemExit):
            raise
        except Exception as exc:  # runtime failure
            click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
            ctx.exit(1)


@click.group(cls=Group)
@click.version_option(__version__)
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
              help="INI file with per-command defaults.")
@click.option("--threads", type=int, default=None, help="Worker processes for campaigns (default: CPU count).")
@click.pass_context
def main(ctx, config_path, threads):
    """Local message-passing decoders: simulation and analysis tools."""
    if config_path:
        ctx.default_map = load_ini(config_path, main.commands)
    if threads is not None and threads < 1:
        raise ConfigError("--threads must be >= 1")
    ctx.obj = {"workers": threads or os.cpu_count() or 1}


def _seed(seed):
    return default_seed() if seed is None else seed


# -- decode / animate ---------------------------------------------------------------


def _decode_common(dim, L, boundary, p, noise, seed, trial, v, m_max, eps, kick, rule, scheduler, mu, t_max):
    g = make_geometry(dim, L, boundary)
    if p is not None and not 0 <= p <= 1:
        raise ConfigError("--p must lie in [0, 1]")
    spec, _ = parse_noise(noise, p, dim, L, g.boundary)
    params = make_params(v, m_max, eps, kick, rule)
    sched = SchedulerSpec(SchedulerKind(scheduler), mu)
    seed = _seed(seed)
    try:
        realization = sample(spec, g, stream(seed, trial, "noise"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    state = DecoderState.from_noise(realization, params, seed=seed, trial=trial)
    cfg = {
        "dim": dim, "L": L, "boundary": g.boundary.value, "noise": spec.to_dict(),
        "decoder": {"v": v, "m_max": m_max, "epsilon_random": eps, "u_kick": kick, "rule": rule},
        "scheduler": {"kind": scheduler, "mu": mu}, "t_max": 64 * L if t_max is None else t_max,
        "trial": trial,
    }
    return g, realization, state, sched, seed, cfg


def _summary(g, realization, state, cfg, seed, t_dec, timed_out, extra=None):
    clean = not state.syndrome.any()
    cls = logical_class_of(state.frame, g) if clean else None
    doc = {
        "config_hash": config_hash(cfg),
        "seed": seed,
        "noise_weight": len(realization),
        "initial_anyons": int(np.count_nonzero(compute_syndrome(realization))),
        "t_dec": t_dec,
        "timed_out": timed_out,
        "logical_class": list(cls) if cls is not None else None,
        "success": bool(clean and not any(cls)),
        "flipped_all": bool(clean and state.frame.all()),
    }
    if extra:
        doc.update(extra)
    return doc


@main.command()
@click.option("--dim", type=int, default=1, show_default=True)
@click.option("--L", "L", type=int, default=64, show_default=True)
@click.option("--boundary", type=click.Choice([b.value for b in Boundary]), default="periodic", show_default=True)
@click.option("--p", "p", type=float, default=None, help="Error probability for random noise kinds.")
@click.option("--noise", default="iid", show_default=True, help="Noise kind, e.g. iid, fractal:n=6, local:corr=3.")
@click.option("--trial", type=int, default=0, show_default=True)
@click.option("--frames", type=click.Path(file_okay=False), default=None, help="Dump per-step PGM frames here.")
@seed_option
@decoder_options
def decode(dim, L, boundary, p, noise, trial, frames, seed, v, m_max, eps, kick, rule, scheduler, mu, t_max):
    """Decode one noise realization and print a JSON summary."""
    g, realization, state, sched, seed, cfg = _decode_common(
        dim, L, boundary, p, noise, seed, trial, v, m_max, eps, kick, rule, scheduler, mu, t_max)
    extra = {}
    if frames:
        written = dump_frames(state, frames, cfg["t_max"])
        t = state.step if not state.syndrome.any() else TIMEOUT
        extra["frames"] = len(written)
    elif sched.kind is SchedulerKind.SYNCHRONOUS:
        t = run_until_clean(state, t_max)
    elif sched.kind is SchedulerKind.MARCHING:
        res = run_marching(state, t_max, mu, seed, trial)
        t = res.summary.t_dec_steps if res.status == 0 else TIMEOUT
        extra.update(t_dec_wall=res.summary.t_dec_wall, t_sim_min=res.summary.t_sim_min,
                     t_sim_max=res.summary.t_sim_max)
    else:
        s = run_uncoordinated(state, None if t_max is None else t_max * mu, mu, seed, trial,
                              joint=sched.kind is SchedulerKind.UNCOORDINATED_JOINT)
        t = s.t_dec_wall if not s.timed_out else TIMEOUT
    timed_out = t is TIMEOUT
    emit(_summary(g, realization, state, cfg, seed, None if timed_out else t, timed_out, extra))


@main.command()
@click.option("--dim", type=int, default=2, show_default=True)
@click.option("--L", "L", type=int, default=32, show_default=True)
@click.option("--boundary", type=click.Choice([b.value for b in Boundary]), default="periodic", show_default=True)
@click.option("--p", "p", type=float, default=None)
@click.option("--noise", default="iid", show_default=True)
@click.option("--trial", type=int, default=0, show_default=True)
@click.option("--prefix", default="frame", show_default=True)
@seed_option
@out_option
@decoder_options
def animate(dim, L, boundary, p, noise, trial, prefix, seed, out, v, m_max, eps, kick, rule, scheduler, mu, t_max):
    """Write per-step syndrome and min-message PGM frames of a synchronous decode."""
    if scheduler != "sync":
        raise ConfigError("frames are recorded for the synchronous decoder only")
    g, realization, state, _, seed, cfg = _decode_common(
        dim, L, boundary, p, noise, seed, trial, v, m_max, eps, kick, rule, scheduler, mu, t_max)
    written = dump_frames(state, out, cfg["t_max"], prefix)
    done = not state.syndrome.any()
    emit(_summary(g, realization, state, cfg, seed, state.step if done else None, not done,
                  {"frames": len(written), "out": str(out)}))


# -- sweep --------------------------------------------------------------------------


@main.command()
@click.option("--dim", type=int, default=1, show_default=True)
@click.option("--L-list", "L_list", default="64,128,256", show_default=True)
@click.option("--p-grid", default="0.3,0.35,0.4,0.45", show_default=True)
@click.option("--trials", type=int, default=1000, show_default=True)
@click.option("--boundary", type=click.Choice([b.value for b in Boundary]), default="periodic", show_default=True)
@click.option("--criterion", type=click.Choice([c.value for c in Criterion]), default="match", show_default=True)
@click.option("--manifest", "from_manifest", type=click.Path(dir_okay=False, exists=True), default=None,
              help="Re-run the campaign recorded in a manifest.")
@seed_option
@out_option
@decoder_options
@click.pass_context
def sweep(ctx, dim, L_list, p_grid, trials, boundary, criterion, from_manifest, seed, out,
          v, m_max, eps, kick, rule, scheduler, mu, t_max):
    """Logical failure rate and decoding time over a (p, L) grid; writes CSV and a manifest."""
    if from_manifest:
        doc = json.loads(Path(from_manifest).read_text())
        a = doc["config"]
        dim, L_list, p_grid, trials = a["dim"], a["L_list"], a["p_grid"], a["trials"]
        boundary, criterion, seed = a["boundary"], a["criterion"], doc["seed"]
        v, m_max, eps, kick, rule = a["v"], a["m_max"], a["eps"], a["kick"], a["rule"]
        scheduler, mu, t_max = a["scheduler"], a["mu"], a["t_max"]
    Ls = parse_list(L_list, int, "L list") if isinstance(L_list, str) else list(L_list)
    ps = parse_list(p_grid, float, "p grid") if isinstance(p_grid, str) else list(p_grid)
    if any(not 0 <= p <= 1 for p in ps):
        raise ConfigError("p grid values must lie in [0, 1]")
    if trials < 1:
        raise ConfigError("--trials must be >= 1")
    seed = _seed(seed)
    params = make_params(v, m_max, eps, kick, rule)
    try:
        base = ExperimentConfig(dim, Ls[0], NoiseSpec.iid(ps[0]), params, SchedulerSpec(scheduler, mu),
                                trials, t_max, seed, Criterion(criterion), Boundary(boundary))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    record = {
        "dim": dim, "L_list": Ls, "p_grid": ps, "trials": trials, "boundary": boundary,
        "criterion": criterion, "v": v, "m_max": m_max, "eps": eps, "kick": kick, "rule": rule,
        "scheduler": scheduler, "mu": mu, "t_max": t_max,
    }
    h = config_hash(record)
    cells = []
    for L in sorted(Ls):
        for p in sorted(ps):
            cfg = base.with_(L=L, noise=NoiseSpec.iid(p))
            stats = estimate_plog(cfg, ctx.obj["workers"])
            cells.append(ScanCell(p, L, stats))
            click.echo(f"p={p} L={L} p_log={stats.p_log:.4g} timeouts={stats.timeouts}", err=True)
    result = ScanResult(cells, [])
    if len(Ls) > 1 and len(ps) > 1:
        result.crossings = crossings_from_curves(sorted(ps), {L: result.curve(L)[1] for L in sorted(Ls)})
    out = Path(out)
    write_text(out / "sweep.csv", campaign_csv(cells, {"config_hash": h, "seed": seed}))
    write_manifest(out / "manifest.json", record, seed, {"outputs": ["sweep.csv"]})
    emit({
        "config_hash": h,
        "seed": seed,
        "csv": str(out / "sweep.csv"),
        "crossings": [{"L_small": a, "L_large": b, "p": c} for a, b, c in result.crossings],
        "crossing_estimate": result.estimate if result.crossings else None,
    })


# -- cluster ------------------------------------------------------------------------


@main.command()
@click.option("--dim", type=int, default=1, show_default=True)
@click.option("--L", "L", type=int, default=None, help="Lattice size (default: the smallest size with two levels).")
@click.option("--p", "p", type=float, default=0.02, show_default=True)
@click.option("--w0", type=int, default=5, show_default=True)
@click.option("--b0", type=int, default=12, show_default=True)
@click.option("--n", "n", type=int, default=13, show_default=True)
@click.option("--norm", type=click.Choice([x.value for x in Norm]), default="inf", show_default=True)
@click.option("--trials", type=int, default=0, show_default=True, help="Estimate level rates over this many trials.")
@click.option("--isolated", default=None, help="beta,gamma[,n]: also report isolated level sets.")
@seed_option
@out_option
def cluster(dim, L, p, w0, b0, n, norm, trials, isolated, seed, out):
    """Hierarchical cluster decomposition of one noise sample (JSON), optional p_k CSV."""
    try:
        params = ClusterParams(w0, b0, n, Norm(norm))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if L is None:
        L = n * (w0 + 2 * b0)
    g = make_geometry(dim, L, "periodic")
    seed = _seed(seed)
    noise = sample(NoiseSpec.iid(p), g, stream(seed, 0, "cluster"))
    h = build_hierarchy(noise, params)
    cfg = {"dim": dim, "L": L, "p": p, "w0": w0, "b0": b0, "n": n, "norm": norm}
    doc = {"config_hash": config_hash(cfg), "seed": seed, "k_L": params.k_max(L),
           "threshold_regime": params.threshold_regime, "noise_points": len(noise), "levels": h.report()}
    if isolated:
        vals = parse_list(isolated, float, "isolated parameters")
        beta, gamma = vals[0], vals[1]
        n_iso = int(vals[2]) if len(vals) > 2 else n
        levels = isolated_hierarchy(noise, beta, gamma, n_iso)
        doc["isolated_sizes"] = [len(x) for x in levels]
    if trials > 0:
        rates = level_rates(NoiseSpec.iid(p), params, g, trials, seed)
        path = Path(out) / "level_rates.csv"
        write_text(path, f"# config_hash={config_hash(cfg)} seed={seed}\n" + rates.to_csv())
        doc["level_rates_csv"] = str(path)
    write_text(Path(out) / "hierarchy.json", json.dumps(doc, indent=2, sort_keys=True, default=_default) + "\n")
    emit(doc)


# -- erosion ------------------------------------------------------------------------


@main.command()
@click.option("--W", "W", type=int, default=8, show_default=True)
@click.option("--v", "v", type=int, default=10, show_default=True)
@click.option("--init", type=click.Choice([m.value for m in MessageInit]), default="trivial", show_default=True)
@click.option("--trials", type=int, default=100, show_default=True)
@click.option("--dim", type=int, default=2, show_default=True)
@seed_option
def erosion(W, v, init, trials, dim, seed):
    """Erosion of random isolated clusters under the modified rule."""
    if W < 1 or trials < 1:
        raise ConfigError("--W and --trials must be >= 1")
    if init == "random" and v < 3:
        raise ConfigError("random-message erosion needs v >= 3")
    seed = _seed(seed)
    st = erosion_trial(W, v, MessageInit(init), trials, seed, dim)
    doc = {
        "W": W, "v": v, "init": init, "dim": dim, "trials": trials, "seed": seed,
        "max_erosion_time": st.max_time, "mean_erosion_time": st.mean_time,
        "bound": st.bound * W, "timeouts": st.timeouts,
        "containment_violations": st.containment_violations,
        "containment_ok": st.containment_ok, "within_bound": st.within_bound,
    }
    emit(doc)
    if not (st.containment_ok and st.within_bound):
        sys.exit(1)


# -- desync-check -------------------------------------------------------------------


@main.command("desync-check")
@click.option("--trials", type=int, default=20, show_default=True)
@click.option("--dims", default="1,2", show_default=True)
@click.option("--L1", "L1", type=int, default=32, show_default=True, help="1D lattice size.")
@click.option("--L2", "L2", type=int, default=12, show_default=True, help="2D lattice size.")
@click.option("--p", "p", type=float, default=0.05, show_default=True)
@click.option("--v", "v", type=int, default=3, show_default=True)
@click.option("--eps", type=float, default=0.0, show_default=True)
@click.option("--mu", type=float, default=1.0, show_default=True)
@seed_option
def desync_check(trials, dims, L1, L2, p, v, eps, mu, seed):
    """Compare marching-soldiers runs against the synchronous decoder trial by trial."""
    seed = _seed(seed)
    dim_list = parse_list(dims, int, "dims")
    if any(d not in (1, 2) for d in dim_list):
        raise ConfigError("dims must be 1 and/or 2")
    params = make_params(v, None, eps, 0, "standard")
    totals = {"trials": 0, "checks": 0, "message_mismatches": 0, "syndrome_mismatches": 0,
              "lag_violations": 0, "frame_mismatches": 0}
    bad = []
    for i in range(trials):
        d = dim_list[i % len(dim_list)]
        g = Geometry(d, L1 if d == 1 else L2)
        noise = sample(NoiseSpec.iid(p), g, stream(seed, i, "noise"))
        state = DecoderState.from_noise(noise, params, seed=seed, trial=i)
        rep = check_faithful(state, seed, i, mu)
        totals["trials"] += 1
        totals["checks"] += rep.checks
        for k in ("message_mismatches", "syndrome_mismatches", "lag_violations"):
            totals[k] += getattr(rep, k)
        totals["frame_mismatches"] += int(not rep.frames_equal)
        if not rep.faithful:
            bad.append({"trial": i, "dim": d, **rep.to_dict()})
    violations = sum(totals[k] for k in ("message_mismatches", "syndrome_mismatches",
                                         "lag_violations", "frame_mismatches"))
    emit({"seed": seed, **totals, "violations": violations, "failures": bad})
    if violations:
        sys.exit(1)


# -- asep ---------------------------------------------------------------------------


@main.command()
@click.option("--m", "m", type=int, default=2, show_default=True, help="Annihilation run length (0 = off).")
@click.option("--q", "q", type=float, default=0.5, show_default=True)
@click.option("--flavors", type=int, default=1, show_default=True)
@click.option("--dim", type=int, default=1, show_default=True)
@click.option("--length", type=int, default=400, show_default=True)
@click.option("--burn-in", type=int, default=20000, show_default=True)
@click.option("--sweeps", type=int, default=100000, show_default=True)
@click.option("--r-min", type=float, default=10, show_default=True)
@click.option("--r-max", type=float, default=300, show_default=True)
@seed_option
@out_option
def asep(m, q, flavors, dim, length, burn_in, sweeps, r_min, r_max, seed, out):
    """Stationary binary-message density around a source; writes CSV, prints the fitted exponent."""
    try:
        params = AsepParams(q=q, m=m, flavors=flavors)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if dim not in (1, 2):
        raise ConfigError("--dim must be 1 or 2")
    seed = _seed(seed)
    if dim == 1:
        prof = density_profile_1d(params, length, burn_in, sweeps, seed=seed)
    else:
        prof = density_profile_2d(params, length, burn_in, sweeps, seed=seed)
    alpha, err = prof.fit_exponent(r_min, min(r_max, float(prof.r[-1])))
    cfg = {"m": m, "q": q, "flavors": flavors, "dim": dim, "length": length, "burn_in": burn_in,
           "sweeps": sweeps}
    path = Path(out) / "asep_density.csv"
    write_text(path, f"# config_hash={config_hash(cfg)} seed={seed}\n" + prof.to_csv())
    emit({"config_hash": config_hash(cfg), "seed": seed, "csv": str(path), "exponent": alpha,
          "exponent_stderr": err, "fit_range": [r_min, r_max]})


if __name__ == "__main__":
    main()
