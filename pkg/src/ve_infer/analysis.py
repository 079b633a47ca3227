"""Structured analysis requests and reports.

A request is a JSON object naming the trial data, the method(s), priors and
sampler settings. :func:`resolve_request` fills every default so the echoed
request in a report is complete: rerunning it reproduces the same numbers.
"""

from __future__ import annotations

import json
import math
import os
import time
from dataclasses import dataclass
from importlib import resources

import jsonschema
from referencing import Registry, Resource

from ._version import __version__
from .conditional import PFIZER_BETA_PRIOR, BetaDistributionParams, analyze_conditional
from .core import BUILTIN_DATASETS, TrialData
from .diagnostics import summarize_chain
from .errors import DomainError, NumericalError
from .mcmc import McmcConfig, PosteriorChain, atomic_write_text, sample_posterior
from .model import GammaPriorPair, LikelihoodConfig

SEED_ENV = "VE_INFER_SEED"
METHODS = ("conditional", "full", "both")
SCHEMA_FILES = ("request", "report", "trial_data", "priors")


class RequestError(DomainError):
    """A request or input file failed to parse or validate.

    ``diagnostics`` lists one human-readable line per problem, each carrying
    a line/column position (JSON syntax) or a field path (schema).
    """

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


def load_schema(name: str) -> dict:
    text = resources.files("ve_infer").joinpath("schemas", f"{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def _registry() -> Registry:
    pairs = []
    for name in SCHEMA_FILES:
        schema = load_schema(name)
        pairs.append((schema["$id"], Resource.from_contents(schema)))
    return Registry().with_resources(pairs)


def validator(name: str) -> jsonschema.protocols.Validator:
    return jsonschema.Draft202012Validator(load_schema(name), registry=_registry())


def _field_path(err) -> str:
    path = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path)
    return path.lstrip(".") or "<root>"


def validate_document(payload, schema_name: str) -> None:
    """Raise :class:`RequestError` listing every schema violation by field path."""
    errors = sorted(validator(schema_name).iter_errors(payload), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        raise RequestError([f"{_field_path(e)}: {_message(e)}" for e in errors])


def _message(err) -> str:
    if err.validator == "anyOf" and err.context:
        return "needs one of: " + " / ".join(sorted({c.message for c in err.context}))
    return err.message


def parse_json(text: str, source: str = "<input>"):
    """Parse JSON, reporting syntax errors as ``source:line:column``.

    NaN and Infinity literals are rejected: they are not JSON.
    """

    def bad_constant(token):
        raise ValueError(f"non-standard JSON constant {token!r}")

    try:
        return json.loads(text, parse_constant=bad_constant)
    except json.JSONDecodeError as exc:
        raise RequestError([f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}"]) from None
    except ValueError as exc:
        raise RequestError([f"{source}: {exc}"]) from None


def read_json_file(path) -> object:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise RequestError([f"{path}: cannot read ({exc.strerror})"]) from None
    return parse_json(text, str(path))


def dumps(payload) -> str:
    """Canonical JSON text: sorted keys, two-space indent, no NaN."""
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"


@dataclass(frozen=True)
class AnalysisRequest:
    data: TrialData
    method: str
    level: float
    thresholds: tuple
    beta_prior: BetaDistributionParams | None
    gamma_priors: GammaPriorPair | None
    mcmc: McmcConfig
    likelihood: LikelihoodConfig
    dataset: str | None = None

    @property
    def runs_conditional(self) -> bool:
        return self.method in ("conditional", "both")

    @property
    def runs_full(self) -> bool:
        return self.method in ("full", "both")

    def to_dict(self) -> dict:
        priors = {}
        if self.beta_prior is not None:
            priors["beta"] = {"a": self.beta_prior.a, "b": self.beta_prior.b}
        if self.gamma_priors is not None:
            priors["gamma"] = self.gamma_priors.to_dict()
        out = {
            "data": self.data.to_dict(),
            "method": self.method,
            "level": self.level,
            "thresholds": list(self.thresholds),
            "priors": priors,
            "mcmc": self.mcmc.to_dict(),
            "likelihood": self.likelihood.to_dict(),
        }
        if self.dataset is not None:
            out["dataset"] = self.dataset
        return out


def _seed_from_env(env) -> int | None:
    raw = env.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return None
    try:
        seed = int(raw.strip())
    except ValueError:
        raise RequestError([f"{SEED_ENV}: not an integer: {raw!r}"]) from None
    if not 0 <= seed < 2**64:
        raise RequestError([f"{SEED_ENV}: seed must lie in [0, 2**64), got {seed}"])
    return seed


def resolve_request(payload: dict, overrides: dict | None = None, env=None) -> AnalysisRequest:
    """Validate a raw request, apply overrides and fill defaults.

    ``overrides`` holds command-line values (``None`` means "not given") under
    the keys ``method``, ``level``, ``seed``, ``chains``, ``iterations``,
    ``burn_in``, ``moment_mode`` and ``variance_n``. Seed precedence is
    override, then request, then the ``VE_INFER_SEED`` environment
    variable, then the built-in default.
    """
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    env = os.environ if env is None else env
    validate_document(payload, "request")

    dataset = payload.get("dataset")
    try:
        if "data" in payload:
            data = TrialData.from_dict(payload["data"])
        else:
            data = BUILTIN_DATASETS[dataset]
    except DomainError as exc:
        raise RequestError([f"data: {exc}"]) from None

    method = overrides.get("method", payload.get("method", "conditional"))
    level = float(overrides.get("level", payload.get("level", 0.95)))
    if not 0.0 < level < 1.0:
        raise RequestError([f"level: must lie in (0, 1), got {level!r}"])
    thresholds = tuple(float(t) for t in payload.get("thresholds", [0.3]))

    priors = payload.get("priors", {})
    beta = None
    gamma = None
    if method in ("conditional", "both"):
        b = priors.get("beta")
        beta = PFIZER_BETA_PRIOR if b is None else BetaDistributionParams(float(b["a"]), float(b["b"]))
    if method in ("full", "both"):
        g = priors.get("gamma")
        if g is None:
            raise RequestError([f"priors.gamma: required when method is {method!r} (use `ve-infer elicit` to build one)"])
        gamma = GammaPriorPair(**{k: float(g[k]) for k in ("a_v", "b_v", "a_c", "b_c")})

    mc = dict(McmcConfig().to_dict())
    mc.update(payload.get("mcmc", {}))
    env_seed = _seed_from_env(env)
    if "seed" not in payload.get("mcmc", {}) and env_seed is not None:
        mc["seed"] = env_seed
    for key in ("seed", "chains", "iterations", "burn_in"):
        if key in overrides:
            mc[key] = overrides[key]
    try:
        mcmc = McmcConfig(**mc)
    except (DomainError, ValueError) as exc:
        raise RequestError([f"mcmc: {exc}"]) from None

    lk = dict(LikelihoodConfig().to_dict())
    lk.update(payload.get("likelihood", {}))
    for key in ("moment_mode", "variance_n"):
        if key in overrides:
            lk[key] = overrides[key]
    try:
        likelihood = LikelihoodConfig(**lk)
    except ValueError as exc:
        raise RequestError([f"likelihood: {exc}"]) from None

    return AnalysisRequest(
        data=data,
        method=method,
        level=level,
        thresholds=thresholds,
        beta_prior=beta,
        gamma_priors=gamma,
        mcmc=mcmc,
        likelihood=likelihood,
        dataset=dataset,
    )


@dataclass
class AnalysisOutcome:
    report: dict
    chain: PosteriorChain | None


def run_analysis(request: AnalysisRequest, clock=time.perf_counter) -> AnalysisOutcome:
    """Run the requested method(s) and assemble the report document."""
    start = clock()
    results = {}
    chain = None
    if request.runs_conditional:
        cond = analyze_conditional(request.data, request.beta_prior, request.level, request.thresholds)
        results["conditional"] = cond.to_dict()
    if request.runs_full:
        chain = sample_posterior(request.data, request.gamma_priors, request.mcmc, request.likelihood)
        results["full"] = summarize_chain(chain, request.level, request.thresholds).to_dict()
    report = {
        "request": request.to_dict(),
        "results": results,
        "provenance": {
            "package": "ve-infer",
            "version": __version__,
            "seed": request.mcmc.seed,
            "moment_mode": request.likelihood.moment_mode.value,
            "variance_n": request.likelihood.variance_n.value,
        },
        "duration_seconds": max(clock() - start, 0.0),
    }
    _check_finite(report)
    return AnalysisOutcome(report=report, chain=chain)


def _check_finite(obj, path="report"):
    if isinstance(obj, float) and not math.isfinite(obj):
        raise NumericalError(f"{path} is not finite ({obj!r})")
    if isinstance(obj, dict):
        for k, v in obj.items():
            _check_finite(v, f"{path}.{k}")
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _check_finite(v, f"{path}[{i}]")


def write_report(report: dict, path) -> None:
    atomic_write_text(path, dumps(report))
