"""Configuration-driven experiment runner.

Verbs: ``run <config>`` executes the tasks requested in a TOML config and
writes CSV / structured-text reports, ``list-models`` prints the model
catalog, ``selftest`` runs the acceptance suite.  Exit status: 0 when all
requested verdicts pass, 1 on a verdict failure, 2 on usage or validation
errors.  The only environment overrides are STABLESUMS_THREADS and
STABLESUMS_OUT.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import constants, models, tail_estimation, verify
from .stable_core import StableLimitParams

TASKS = ("tail_profile", "b_table", "theory_constants", "convergence", "diagnostics")

_NOISE_SCHEMAS = {
    "two_sided_pareto": "alpha > 0, p + q = 1, scale > 0",
    "symmetrized_pareto": "alpha > 0, scale > 0",
    "student_t": "dof > 0, scale > 0",
    "standard_normal": "(no parameters)",
}

_MODEL_SCHEMAS = {
    "iid_rv": "noise = {variant, ...}",
    "differenced": "noise = {variant, ...}",
    "m_dependent": "noise = {variant, ...}; ma_coeffs = [c0, c1, ...]",
    "sre": "dist_a = {variant, ...}; dist_b = {variant, ...}; burn_in >= 0",
    "garch11": "alpha0 > 0; alpha1 >= 0; 0 <= beta1 < 1; squared = bool; "
               "noise = {variant, ...}; burn_in >= 0",
    "stoch_vol": "noise = {variant, ...}; ar = [...]; ma = [...]; burn_in >= 0",
    "sas_ma": "coeffs = [c0, c1, ...]; 0 < alpha < 2",
}


class ConfigError(ValueError):
    pass


@dataclass
class Sizes:
    n: int = 10_000
    replicates: int = 1_000_000
    d_max: int = 16
    m_grid: tuple = ()

    def resolved_m_grid(self):
        if self.m_grid:
            return tuple(int(v) for v in self.m_grid)
        return tuple(sorted({max(2, int(self.n ** g)) for g in (0.3, 0.5, 0.7)}))


@dataclass
class ExperimentConfig:
    seed: int
    tasks: tuple
    model_section: dict
    sizes: Sizes
    output: str = "out"

    def __post_init__(self):
        if not self.tasks:
            raise ConfigError("tasks must be non-empty")
        for t in self.tasks:
            if t not in TASKS:
                raise ConfigError(f"unknown task {t!r}; valid tasks: {', '.join(TASKS)}")
        if self.sizes.n < 2 or self.sizes.replicates < 1 or self.sizes.d_max < 1:
            raise ConfigError("sizes must be positive (n >= 2)")

    def build_model(self):
        return build_model(self.model_section)

    def to_toml(self) -> str:
        lines = [f"seed = {int(self.seed)}",
                 f'output = "{self.output}"',
                 "tasks = [" + ", ".join(f'"{t}"' for t in self.tasks) + "]",
                 "",
                 "[sizes]",
                 f"n = {self.sizes.n}",
                 f"replicates = {self.sizes.replicates}",
                 f"d_max = {self.sizes.d_max}"]
        if self.sizes.m_grid:
            lines.append("m_grid = [" + ", ".join(str(int(v)) for v in self.sizes.m_grid) + "]")
        lines.append("")
        lines.extend(_dict_to_toml("model", self.model_section))
        return "\n".join(lines) + "\n"


def _fmt_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return repr(v)
    if isinstance(v, str):
        return f'"{v}"'
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt_value(x) for x in v) + "]"
    raise ConfigError(f"cannot serialize value {v!r}")


def _dict_to_toml(prefix: str, d: dict) -> list:
    scalars = {k: v for k, v in d.items() if not isinstance(v, dict)}
    tables = {k: v for k, v in d.items() if isinstance(v, dict)}
    lines = [f"[{prefix}]"]
    lines.extend(f"{k} = {_fmt_value(v)}" for k, v in scalars.items())
    for k, v in tables.items():
        lines.append("")
        lines.extend(_dict_to_toml(f"{prefix}.{k}", v))
    return lines


def parse_config(text: str) -> ExperimentConfig:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"config parse error: {e}") from e
    try:
        seed = int(raw["seed"])
        tasks = tuple(raw["tasks"])
        model_section = dict(raw["model"])
    except KeyError as e:
        raise ConfigError(f"config missing required field {e.args[0]!r}") from e
    sizes_raw = raw.get("sizes", {})
    sizes = Sizes(
        n=int(sizes_raw.get("n", 10_000)),
        replicates=int(sizes_raw.get("replicates", 1_000_000)),
        d_max=int(sizes_raw.get("d_max", 16)),
        m_grid=tuple(sizes_raw.get("m_grid", ())),
    )
    return ExperimentConfig(seed=seed, tasks=tasks, model_section=model_section,
                            sizes=sizes, output=str(raw.get("output", "out")))


def load_config(path) -> ExperimentConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def _build_noise(section: dict):
    kind = section.get("variant")
    params = {k: v for k, v in section.items() if k != "variant"}
    try:
        if kind == "two_sided_pareto":
            return models.TwoSidedPareto(**params)
        if kind == "symmetrized_pareto":
            return models.SymmetrizedPareto(**params)
        if kind == "student_t":
            return models.StudentT(**params)
        if kind == "standard_normal":
            return models.StandardNormal(**params)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"invalid noise parameters for {kind!r}: {e}") from e
    raise ConfigError(f"unknown noise variant {kind!r}; valid: {', '.join(_NOISE_SCHEMAS)}")


def _build_positive(section: dict):
    kind = section.get("variant")
    params = {k: v for k, v in section.items() if k != "variant"}
    try:
        if kind == "log_normal":
            return models.LogNormal(**params)
        if kind == "constant":
            return models.Constant(**params)
        if kind == "affine_squared_normal":
            return models.AffineSquaredNormal(**params)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"invalid coefficient parameters for {kind!r}: {e}") from e
    raise ConfigError(f"unknown coefficient variant {kind!r}")


def build_model(section: dict):
    kind = section.get("variant")
    try:
        if kind == "iid_rv":
            return models.IidRV(_build_noise(section["noise"]))
        if kind == "differenced":
            return models.Differenced(_build_noise(section["noise"]))
        if kind == "m_dependent":
            return models.MDependent(_build_noise(section["noise"]),
                                     tuple(section["ma_coeffs"]))
        if kind == "sre":
            return models.Sre(_build_positive(section["dist_a"]),
                              _build_positive(section["dist_b"]),
                              burn_in=int(section.get("burn_in", 10_000)))
        if kind == "garch11":
            noise = (_build_noise(section["noise"]) if "noise" in section
                     else models.StandardNormal())
            return models.Garch11(float(section["alpha0"]), float(section["alpha1"]),
                                  float(section["beta1"]), noise=noise,
                                  burn_in=int(section.get("burn_in", 10_000)),
                                  squared=bool(section.get("squared", False)))
        if kind == "stoch_vol":
            return models.StochVol(_build_noise(section["noise"]),
                                   ar=tuple(section.get("ar", ())),
                                   ma=tuple(section.get("ma", ())),
                                   burn_in=int(section.get("burn_in", 10_000)))
        if kind == "sas_ma":
            return models.SasMa(tuple(section["coeffs"]), float(section["alpha"]))
    except ConfigError:
        raise
    except KeyError as e:
        raise ConfigError(f"model {kind!r} is missing field {e.args[0]!r}") from e
    except (TypeError, ValueError) as e:
        raise ConfigError(f"invalid model parameters for {kind!r}: {e}") from e
    raise ConfigError(
        f"unknown model variant {kind!r}; valid: {', '.join(_MODEL_SCHEMAS)}"
    )


# ---------------------------------------------------------------------------
# Theory constants per model family
# ---------------------------------------------------------------------------

@dataclass
class TheoryConstants:
    alpha: float
    c_plus: float
    c_minus: float
    se: float = 0.0
    lines: list = field(default_factory=list)  # structured text record

    def params(self) -> StableLimitParams:
        return StableLimitParams(self.alpha, max(self.c_plus, 0.0), max(self.c_minus, 0.0))


def theory_constants(model, *, seed: int = 0, threads: int = 1,
                     mc_draws: int = 1_000_000) -> TheoryConstants:
    """Theory-side (alpha, c_plus, c_minus) with solver/MC diagnostics."""
    lines = [f"model: {model.label()}"]
    if isinstance(model, models.IidRV):
        p, q = model.tail_balance()
        a = model.tail_index()
        lines += [f"alpha: {a} (noise tail index)", f"c_plus: {p} (tail balance)",
                  f"c_minus: {q} (tail balance)"]
        return TheoryConstants(a, p, q, 0.0, lines)
    if isinstance(model, models.Differenced):
        a = model.tail_index()
        lines += [f"alpha: {a} (noise tail index)",
                  "c_plus: 0 (degenerate limit)", "c_minus: 0 (degenerate limit)"]
        return TheoryConstants(a, 0.0, 0.0, 0.0, lines)
    if isinstance(model, models.MDependent):
        a = model.tail_index()
        p, q = model.noise.tail_balance()
        cp, cm = constants.c_linear_pareto(model.ma_coeffs, a, p, q)
        lines += [f"alpha: {a}", f"c_plus: {cp} (exact window-weight increment)",
                  f"c_minus: {cm}"]
        return TheoryConstants(a, cp, cm, 0.0, lines)
    if isinstance(model, models.SasMa):
        c = constants.c_sas(model.coeffs, model.alpha)
        lines += [f"alpha: {model.alpha}",
                  f"c_plus = c_minus: {c} (exact coefficient-sum formula)"]
        return TheoryConstants(model.alpha, c, c, 0.0, lines)
    if isinstance(model, models.StochVol):
        a = model.tail_index()
        cp, cm = constants.c_sv(model.noise)
        lines += [f"alpha: {a} (noise tail index)",
                  f"c_plus: {cp} (noise tail balance)", f"c_minus: {cm}"]
        return TheoryConstants(a, cp, cm, 0.0, lines)
    if isinstance(model, models.Sre):
        kr = constants.kesten_index(model.dist_a, mc_draws=mc_draws, seed=seed)
        g = constants.goldie_c0(model.dist_a, model.dist_b, kr.alpha,
                                mc_draws=mc_draws, seed=seed, threads=threads)
        est = constants.c_plus_sre(model.dist_a, kr.alpha, mc_draws=mc_draws,
                                   seed=seed, threads=threads)
        lines += [f"alpha: {kr.alpha} ({kr.method}, residual {kr.residual:.3g}, se {kr.se:.3g})",
                  f"tail level c0: {g.c0:.6g} +- {g.se:.3g}",
                  f"c_plus: {est.mean_functional:.6g} +- {est.se:.3g} "
                  f"(series cutoff {est.truncation}, tail bound {est.truncation_bound:.3g})",
                  "c_minus: 0 (positive process)"]
        tc = TheoryConstants(kr.alpha, est.mean_functional, 0.0, est.se, lines)
        tc.tail_constant = g.c0
        tc.tail_constant_se = g.se
        return tc
    if isinstance(model, models.Garch11):
        a = model.squared_index()
        a_dist = models._garch_coefficient_dist(model.alpha1, model.beta1, model.noise)
        g = constants.goldie_c0(a_dist, models.Constant(model.alpha0), a,
                                mc_draws=mc_draws, seed=seed, threads=threads)
        ez2a = constants._noise_abs_moment(model.noise, 2.0 * a)
        amplitude = g.c0 * ez2a
        lines += [f"squared-process tail index alpha: {a}",
                  f"volatility tail level c1: {g.c0:.6g} +- {g.se:.3g}",
                  f"E|Z|^(2 alpha): {ez2a:.6g}"]
        if model.squared:
            est = constants.c_plus_garch_sq(model.alpha0, model.alpha1, model.beta1,
                                            model.noise, a, mc_draws=mc_draws,
                                            seed=seed, threads=threads)
            lines += [f"c_plus: {est.mean_functional:.6g} +- {est.se:.3g} "
                      f"(series cutoff {est.truncation}, tail bound {est.truncation_bound:.3g})",
                      "c_minus: 0 (positive process)",
                      f"marginal tail amplitude: {amplitude:.6g}"]
            tc = TheoryConstants(a, est.mean_functional, 0.0, est.se, lines)
        else:
            if not 0.0 < 2.0 * a < 2.0:
                lines += [f"returns tail index 2 alpha = {2 * a:.4g} is outside (0, 2); "
                          "no stable-sum constants for this configuration"]
                tc = TheoryConstants(min(2.0 * a, 1.999), 0.0, 0.0, 0.0, lines)
                tc.excluded = True
                tc.tail_constant = amplitude
                tc.tail_constant_se = g.se * ez2a
                return tc
            est = constants.c_plus_garch(model.alpha0, model.alpha1, model.beta1,
                                         model.noise, a, mc_draws=mc_draws,
                                         seed=seed, threads=threads)
            lines += [f"c_plus = c_minus: {est.mean_functional:.6g} +- {est.se:.3g} "
                      f"(series cutoff {est.truncation}, tail bound {est.truncation_bound:.3g})",
                      f"marginal tail amplitude: {amplitude:.6g}"]
            tc = TheoryConstants(2.0 * a, est.mean_functional, est.mean_functional,
                                 est.se, lines)
        tc.tail_constant = amplitude
        tc.tail_constant_se = g.se * ez2a
        return tc
    raise ConfigError(f"no theory constants for model {model!r}")


# ---------------------------------------------------------------------------
# Task runner
# ---------------------------------------------------------------------------

def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8", newline="\n")


def run(config_path, *, threads: int | None = None, out_override: str | None = None,
        seed_override: int | None = None, stdout=None) -> int:
    """Execute a config; returns the process exit status."""
    out_stream = stdout if stdout is not None else sys.stdout
    threads = threads if threads is not None else _env_threads()
    try:
        cfg = load_config(config_path)
    except FileNotFoundError:
        print(f"error: config file not found: {config_path}", file=out_stream)
        return 2
    except ConfigError as e:
        print(f"error: {e}", file=out_stream)
        return 2
    if seed_override is not None:
        cfg = ExperimentConfig(seed=seed_override, tasks=cfg.tasks,
                               model_section=cfg.model_section, sizes=cfg.sizes,
                               output=cfg.output)
    out_dir = Path(out_override or os.environ.get("STABLESUMS_OUT") or cfg.output)
    try:
        model = cfg.build_model()
    except ConfigError as e:
        print(f"error: {e}", file=out_stream)
        return 2

    out_dir.mkdir(parents=True, exist_ok=True)
    digest = hashlib.sha256(Path(config_path).read_bytes()).hexdigest()
    seed = cfg.seed
    sizes = cfg.sizes
    summary = [
        f"config_sha256: {digest}",
        f"seed: {seed}",
        f"model: {model.label()}",
        f"tasks: {', '.join(cfg.tasks)}",
        f"sizes: n={sizes.n} replicates={sizes.replicates} d_max={sizes.d_max} "
        f"m_grid={list(sizes.resolved_m_grid())}",
    ]
    verdicts = []
    theory = None

    def get_theory():
        nonlocal theory
        if theory is None:
            theory = theory_constants(model, seed=seed, threads=threads,
                                      mc_draws=min(sizes.replicates, 1_000_000))
        return theory

    if "tail_profile" in cfg.tasks:
        prof = tail_estimation.tail_profile(model, n_ref=max(100 * sizes.n, 100_000),
                                            seed=seed, threads=threads)
        rows = ["n,a_n"]
        n_grid = sorted({int(v) for v in np.geomspace(10, sizes.n, 8)})
        for nn in n_grid:
            rows.append(f"{nn},{prof.a_fn(nn):.10g}")
        _write(out_dir / "tail_profile.csv", "\n".join(rows) + "\n")
        summary += [
            f"tail_profile: alpha_hat={prof.alpha_hat:.6g} +- {prof.alpha_se:.3g} "
            f"p_hat={prof.p_hat:.4f} q_hat={prof.q_hat:.4f}",
        ]

    btable = None
    if "b_table" in cfg.tasks:
        depths = sorted({*(2 ** k for k in range(0, 12) if 2 ** k <= sizes.d_max),
                         sizes.d_max})
        btable = tail_estimation.b_table(model, depths, n=sizes.n,
                                         replicates=sizes.replicates,
                                         seed=seed, threads=threads)
        btable.to_csv(out_dir / "b_table.csv")
        ce = tail_estimation.estimate_c(btable) if btable.rows[-1].d >= 8 else None
        if ce is not None:
            summary += [
                f"b_table: c_plus={ce.c_plus:.6g} +- {ce.se_plus:.3g} "
                f"c_minus={ce.c_minus:.6g} +- {ce.se_minus:.3g} (ratio at d={ce.d_max})",
                f"b_table: slope c_plus={ce.c_plus_slope:.6g} +- {ce.slope_se:.3g}; "
                f"converged={ce.converged_plus}/{ce.converged_minus}; flags={ce.flags or 'none'}",
            ]

    if "theory_constants" in cfg.tasks:
        tc = get_theory()
        _write(out_dir / "constants.txt", "\n".join(tc.lines) + "\n")
        summary += [f"theory_constants: alpha={tc.alpha:.6g} c_plus={tc.c_plus:.6g} "
                    f"c_minus={tc.c_minus:.6g} se={tc.se:.3g}"]
        if btable is not None and btable.rows[-1].d >= 8:
            ce = tail_estimation.estimate_c(btable)
            # agreement via the ratio or, for models with a depth transient
            # (geometric memory), via the top-segment slope
            ratio_ok = abs(ce.c_plus - tc.c_plus) <= 3.0 * math.sqrt(ce.se_plus ** 2 + tc.se ** 2)
            slope_ok = abs(ce.c_plus_slope - tc.c_plus) <= 3.0 * math.sqrt(ce.slope_se ** 2 + tc.se ** 2)
            ok = ratio_ok or slope_ok
            verdicts.append(("theory_vs_empirical_c", ok))
            summary += [f"theory_vs_empirical_c: ratio {ce.c_plus:.4g} / slope "
                        f"{ce.c_plus_slope:.4g} vs theory {tc.c_plus:.4g} -> "
                        f"{'PASS' if ok else 'FAIL'}"]

    if "convergence" in cfg.tasks:
        tc = get_theory()
        if getattr(tc, "excluded", False) or abs(tc.alpha - 1.0) <= verify.ALPHA_ONE_BAND \
                and tc.c_plus != tc.c_minus:
            summary += ["convergence: excluded (tail index at 1 with asymmetric limit; "
                        "the stable-sum theory used here does not cover this case)"]
        else:
            if hasattr(model, "tail_constant") and model.tail_constant is None \
                    and getattr(tc, "tail_constant", None) is not None:
                model = _with_tail_constant(model, tc)
            centering = "mean" if tc.alpha > 1.0 else "none"
            # partial-sum replicates are capped: each replicate costs a full
            # length-n path, unlike the cheap b_table counting replicates
            exp = verify.SumExperiment(model, n=sizes.n,
                                       replicates=min(sizes.replicates, 20_000),
                                       centering=centering)
            rep = verify.convergence_report(model, tc.params(), exp,
                                            seed=seed, threads=threads)
            _write(out_dir / "convergence.txt", rep.to_text() + "\n")
            rows = ["x,ecf_re,ecf_im,psi_re,psi_im,abs_diff"]
            for x, e, t, dd in rep.cf.table():
                rows.append(f"{x},{e.real:.10g},{e.imag:.10g},{t.real:.10g},{t.imag:.10g},{dd:.10g}")
            _write(out_dir / "cf_table.csv", "\n".join(rows) + "\n")
            label = "degenerate limit confirmed" if tc.params().is_degenerate and rep.verdict \
                else ("PASS" if rep.verdict else "FAIL")
            verdicts.append(("convergence", rep.verdict))
            summary += [f"convergence: cf_distance={rep.cf.distance:.6g} "
                        f"(threshold {rep.cf.threshold:.3g}) ks={rep.ks.statistic:.6g} "
                        f"(critical {rep.ks.critical_value:.3g}) verdict={label}"]

    if "diagnostics" in cfg.tasks:
        tc = get_theory()
        if hasattr(model, "tail_constant") and model.tail_constant is None \
                and getattr(tc, "tail_constant", None) is not None:
            model = _with_tail_constant(model, tc)
        m_grid = sizes.resolved_m_grid()
        reps = min(sizes.replicates, 100_000)
        ac_rows = ["m,d,estimate,se,conditioning_count"]
        for m_block in m_grid:
            for d in (1, 2, 4):
                if d >= m_block:
                    continue
                ac = verify.anticluster_diag(model, d, m_block, 1.0, sizes.n,
                                             max(200, reps // 100), seed=seed,
                                             threads=threads)
                ac_rows.append(f"{m_block},{d},{ac.estimate:.6g},{ac.se:.3g},"
                               f"{ac.conditioning_count}")
        _write(out_dir / "anticluster.csv", "\n".join(ac_rows) + "\n")
        mx_rows = ["m,x,gap,band"]
        for m_block in m_grid:
            mx = verify.mixing_block_diag(model, sizes.n, m_block, (0.5, 1.0, 2.0),
                                          reps, seed=seed, threads=threads)
            for x, gapv, bandv in mx.rows():
                mx_rows.append(f"{m_block},{x},{gapv:.6g},{bandv:.6g}")
        _write(out_dir / "mixing.csv", "\n".join(mx_rows) + "\n")
        lev = verify.levy_tail_check(model, tc.params(), m_grid[0], sizes.n,
                                     (1.0, 2.0, 4.0), reps, seed=seed, threads=threads,
                                     theory_se=tc.se)
        lev_rows = ["x,empirical,theory,se,count,excluded,passed"]
        for r in lev.rows:
            lev_rows.append(f"{r.x},{r.empirical:.6g},{r.theory:.6g},{r.se:.3g},"
                            f"{r.count},{r.excluded},{r.passed}")
        _write(out_dir / "levy_tail.csv", "\n".join(lev_rows) + "\n")
        if not tc.params().is_degenerate:
            verdicts.append(("levy_tail", lev.verdict))
        summary += [f"diagnostics: anticluster/mixing curves written; "
                    f"levy_tail verdict={'PASS' if lev.verdict else 'FAIL'}"]

    all_pass = all(ok for _, ok in verdicts) if verdicts else True
    summary += ["verdicts: " + (", ".join(f"{k}={'PASS' if ok else 'FAIL'}"
                                          for k, ok in verdicts) or "none requested"),
                f"overall: {'PASS' if all_pass else 'FAIL'}"]
    _write(out_dir / "summary.txt", "\n".join(summary) + "\n")
    print("\n".join(summary), file=out_stream)
    return 0 if all_pass else 1


def _with_tail_constant(model, tc):
    """Clone an SRE/GARCH spec with the theory tail amplitude filled in."""
    if isinstance(model, models.Sre):
        return models.Sre(model.dist_a, model.dist_b, burn_in=model.burn_in,
                          alpha=tc.alpha, tail_constant=tc.tail_constant)
    if isinstance(model, models.Garch11):
        return models.Garch11(model.alpha0, model.alpha1, model.beta1,
                              noise=model.noise, burn_in=model.burn_in,
                              squared=model.squared,
                              alpha=tc.alpha if model.squared else tc.alpha / 2.0,
                              tail_constant=tc.tail_constant)
    return model


def _env_threads() -> int:
    env = os.environ.get("STABLESUMS_THREADS")
    return max(1, int(env)) if env else 1


def list_models(stdout=None) -> int:
    out = stdout if stdout is not None else sys.stdout
    print(f"{len(models.MODEL_FAMILIES)} model families:", file=out)
    for key, title, recursion in models.MODEL_FAMILIES:
        extra = " / GARCH(1,1)" if key == "garch11" else ""
        print(f"\n{key}{extra}: {title}", file=out)
        print(f"  law: {recursion}", file=out)
        print(f"  parameters: {_MODEL_SCHEMAS[key]}", file=out)
    print("\nnoise variants: " + "; ".join(f"{k} ({v})" for k, v in _NOISE_SCHEMAS.items()),
          file=out)
    return 0


def selftest(threads: int = 1, stdout=None) -> int:
    from . import acceptance
    out = stdout if stdout is not None else sys.stdout
    results = acceptance.run_all(threads=threads, stream=out)
    return 0 if all(r.passed for r in results) else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="stablesums",
        description="Simulate heavy-tailed stationary sequences and verify the "
                    "stable limits of their partial sums.")
    sub = parser.add_subparsers(dest="verb")
    p_run = sub.add_parser("run", help="execute an experiment config")
    p_run.add_argument("config")
    p_run.add_argument("--threads", type=int, default=None)
    p_run.add_argument("--out", default=None)
    p_run.add_argument("--seed", type=int, default=None)
    sub.add_parser("list-models", help="print the model catalog")
    p_self = sub.add_parser("selftest", help="run the acceptance suite")
    p_self.add_argument("--threads", type=int, default=None)
    args = parser.parse_args(argv)
    if args.verb == "run":
        return run(args.config, threads=args.threads, out_override=args.out,
                   seed_override=args.seed)
    if args.verb == "list-models":
        return list_models()
    if args.verb == "selftest":
        return selftest(threads=args.threads or _env_threads())
    parser.print_help()
    return 2


if __name__ == "__main__":
    sys.exit(main())
