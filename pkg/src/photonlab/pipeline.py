"""Deterministic design-validation workflow.

Stages, in run order: intent routing (keyword fallback), physics-domain
classification, design lint against physical parameter ranges, watchdogged
simulator execution, a 0-10 alignment rubric, and a targeted refinement
loop capped at three iterations that always returns the best-scoring run
(revert-to-best).  Every stage is an injectable callable with a
deterministic default, so an external reviewer or generator can replace one
stage without touching the contract.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor, TimeoutError as FutureTimeout
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable

from .experiments import (
    EXPERIMENTS,
    MetricSet,
    outcome_covered,
    params_from_setup,
    run_experiment,
    suggest_simulator_key,
)
from .model import ComponentKind, OpticalSetup, validate_structure

__all__ = [
    "Intent",
    "PhysicsDomain",
    "ReviewVerdict",
    "AlignmentReport",
    "RunRecord",
    "RunStatus",
    "SimulationPlan",
    "PipelineStages",
    "classify_intent_fallback",
    "classify_domain",
    "lint_design",
    "score_alignment",
    "run_pipeline",
    "REFINEMENT_THRESHOLD",
    "MAX_ITERATIONS",
    "WATCHDOG_SECONDS",
]

REFINEMENT_THRESHOLD = 6
MAX_ITERATIONS = 3
WATCHDOG_SECONDS = 30.0

WAVELENGTH_RANGE_NM = (200.0, 2000.0)
SQUEEZING_MAX_DB = 15.0
DETECTOR_EFFICIENCY_RANGE = (0.1, 0.95)

# Tolerance for criterion (c): simulator parameters must sit within 1% of
# the design's values.
PARAM_MATCH_RTOL = 0.01

# Simulator parameter name -> design parameter name, for criterion (c).
_PARAM_ALIASES = {
    "detector_efficiency": "efficiency",
    "dark_counts_hz": "dark_counts_hz",
    "wavelength_nm": "wavelength_nm",
    "signal_wavelength_nm": "wavelength_nm",
    "pump_wavelength_nm": "wavelength_nm",
    "power_mw": "power_mw",
    "reflectivity": "reflectivity",
    "slit_separation_mm": "slit_separation_mm",
    "attenuation_db_per_km": "attenuation_db_per_km",
    "probe_rabi_mhz": "rabi_frequency_mhz",
    "coupling_rabi_mhz": "rabi_frequency_mhz",
    "atomic_density_per_cm3": "atomic_density_per_cm3",
}


class Intent(str, Enum):
    CHAT = "chat"
    DESIGN = "design"


class PhysicsDomain(str, Enum):
    DISCRETE_PHOTONIC = "discrete_photonic"
    TEMPORAL = "temporal"
    CONTINUOUS_VARIABLE = "continuous_variable"
    ATOMIC = "atomic"


@dataclass(frozen=True)
class ReviewVerdict:
    approved: bool
    confidence: float
    concerns: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.approved and not self.concerns:
            raise ValueError("a rejection must carry at least one concern")


@dataclass(frozen=True)
class AlignmentReport:
    score: int
    criterion_scores: tuple[float, float, float, float]  # physics, components, params, observables
    missing_from_code: tuple[str, ...] = ()
    wrong_in_code: tuple[str, ...] = ()


class RunStatus(str, Enum):
    REJECTED_PRE_RUN = "rejected_pre_run"
    RUN_FAILED = "run_failed"
    SCORED = "scored"


@dataclass(frozen=True)
class SimulationPlan:
    key: str
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class RunRecord:
    iteration: int
    domain: PhysicsDomain
    plan: SimulationPlan
    verdict: ReviewVerdict
    status: RunStatus
    metrics: MetricSet | None = None
    alignment: AlignmentReport | None = None
    failure: str = ""

    @property
    def score(self) -> int:
        return self.alignment.score if self.alignment is not None else -1


_DESIGN_VERBS = ("create", "design", "add", "remove", "modify", "use", "replace", "build", "make")
_INTERROGATIVES = (
    "can", "could", "what", "which", "why", "how", "where", "when", "who", "whose",
    "is", "are", "was", "were", "do", "does", "did", "should", "would", "will",
    "may", "might", "shall",
)


def classify_intent_fallback(text: str) -> Intent:
    """Keyword routing between conversation and design commands.

    Total over arbitrary strings and biased toward CHAT: interrogative
    framing (question mark or leading question word) always routes to chat,
    design only on an imperative design verb, anything unclear stays chat.
    """
    words = [w for w in "".join(ch if ch.isalnum() else " " for ch in text.lower()).split() if w]
    if not words:
        return Intent.CHAT
    if text.strip().endswith("?") or words[0] in _INTERROGATIVES:
        return Intent.CHAT
    if any(w in _DESIGN_VERBS for w in words):
        return Intent.DESIGN
    return Intent.CHAT


def _has_param_token(setup: OpticalSetup, token: str) -> bool:
    return any(token in name for c in setup.components for name in c.params)


def _has_label_token(setup: OpticalSetup, token: str) -> bool:
    return any(token in c.label.lower() for c in setup.components)


def classify_domain(setup: OpticalSetup) -> PhysicsDomain:
    """Rule table over component labels and parameter names; total function."""
    if _has_label_token(setup, "vapor") or _has_label_token(setup, "atom"):
        return PhysicsDomain.ATOMIC
    if (
        _has_param_token(setup, "squeezing")
        or _has_label_token(setup, "squeez")
        or _has_label_token(setup, "homodyne")
    ):
        return PhysicsDomain.CONTINUOUS_VARIABLE
    has_delay = (
        _has_label_token(setup, "delay")
        or _has_param_token(setup, "path_difference")
        or _has_param_token(setup, "delay")
    )
    has_coincidence = _has_label_token(setup, "coincidence") or _has_label_token(setup, "time tagger")
    if has_delay and has_coincidence:
        return PhysicsDomain.TEMPORAL
    return PhysicsDomain.DISCRETE_PHOTONIC


def lint_design(setup: OpticalSetup) -> ReviewVerdict:
    """Physical-range and structural checks before anything is executed.

    Checks: wavelength parameters within 200-2000 nm, squeezing below
    15 dB, detector efficiencies within 0.1-0.95, and a clean structural
    validation.  Confidence is the fraction of passed checks.
    """
    concerns: list[str] = []
    checks = 0
    for component in setup.components:
        for name, quantity in component.params.items():
            lowered = name.lower()
            if "wavelength" in lowered:
                checks += 1
                if not WAVELENGTH_RANGE_NM[0] <= quantity.value <= WAVELENGTH_RANGE_NM[1]:
                    concerns.append(
                        f"{component.id}.{name}: wavelength {quantity.value} nm outside "
                        f"{WAVELENGTH_RANGE_NM[0]:.0f}-{WAVELENGTH_RANGE_NM[1]:.0f} nm"
                    )
            elif "squeezing" in lowered:
                checks += 1
                if quantity.value >= SQUEEZING_MAX_DB:
                    concerns.append(
                        f"{component.id}.{name}: squeezing {quantity.value} dB is not "
                        f"physically realistic (must stay below {SQUEEZING_MAX_DB:.0f} dB)"
                    )
            elif component.kind is ComponentKind.DETECTOR and lowered == "efficiency":
                checks += 1
                if not DETECTOR_EFFICIENCY_RANGE[0] <= quantity.value <= DETECTOR_EFFICIENCY_RANGE[1]:
                    concerns.append(
                        f"{component.id}.{name}: detector efficiency {quantity.value} outside "
                        f"{DETECTOR_EFFICIENCY_RANGE[0]}-{DETECTOR_EFFICIENCY_RANGE[1]}"
                    )
    checks += 1
    structural = validate_structure(setup)
    concerns.extend(f"structure.{f.code}: {f.message}" for f in structural)
    violations = len(concerns)
    confidence = max(0.0, 1.0 - violations / checks)
    return ReviewVerdict(approved=not concerns, confidence=confidence, concerns=tuple(concerns))


_ENTANGLEMENT_OUTCOME_TOKENS = ("entangle", "chsh", "concurrence", "witness", "mermin", "bell")
_ENTANGLEMENT_METRIC_TOKENS = ("entanglement_entropy", "chsh", "concurrence", "witness", "mermin")


def _round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


def score_alignment(setup: OpticalSetup, key: str, metrics: MetricSet) -> AlignmentReport:
    """0-10 rubric: four criteria worth 2.5 points each, proportional credit.

    (a) the simulator's physics domain matches the setup's classified
    domain; (b) each component category present in the setup maps to an
    effect the simulator models; (c) parameters the simulator used stay
    within 1% of the design's values; (d) every declared expected outcome
    appears among the produced metrics, and entanglement claims require a
    genuine entanglement metric rather than intensity counts.

    Findings are prefixed "blocking:" only when the run neither matches the
    domain formalism nor produces any claimed observable; the total is then
    at most 5, so a score of 6 or more never carries blocking findings.
    """
    if key not in EXPERIMENTS:
        raise KeyError(f"unknown simulator key {key!r}")
    spec = EXPERIMENTS[key]
    missing: list[str] = []
    wrong: list[str] = []

    # (a) formalism / domain
    domain = classify_domain(setup)
    a = 2.5 if spec.domain == domain.value else 0.0
    if a == 0.0:
        wrong.append(
            f"simulator {key!r} works in the {spec.domain} domain but the design "
            f"calls for {domain.value}"
        )

    # (b) component coverage
    kinds = {c.kind for c in setup.components}
    covered = {k for k in kinds if k in spec.modeled_kinds}
    b = 2.5 * (len(covered) / len(kinds)) if kinds else 2.5
    for k in sorted(kinds - covered, key=lambda k: k.value):
        missing.append(f"no modeled effect for {k.value} components")

    # (c) parameter agreement
    used = metrics.used_params()
    comparisons = 0
    matched = 0
    for sim_name, sim_value in sorted(used.items()):
        design_name = _PARAM_ALIASES.get(sim_name)
        if design_name is None:
            continue
        design_values = [
            q.value
            for c in setup.components
            for n, q in c.params.items()
            if n == design_name
        ]
        if not design_values:
            continue
        comparisons += 1
        tolerance = PARAM_MATCH_RTOL * max(1e-12, max(abs(v) for v in design_values))
        if any(abs(sim_value - v) <= tolerance for v in design_values):
            matched += 1
        else:
            wrong.append(
                f"parameter {sim_name}={sim_value:g} does not match the design's "
                f"{design_name} values {sorted(set(design_values))}"
            )
    c = 2.5 * (matched / comparisons) if comparisons else 2.5

    # (d) claimed observables
    names = metrics.names()
    outcomes = setup.expected_outcomes
    satisfied = 0
    for outcome in outcomes:
        ok = outcome_covered(outcome, names)
        if ok and any(t in outcome.lower() for t in _ENTANGLEMENT_OUTCOME_TOKENS):
            ok = any(any(t in n for t in _ENTANGLEMENT_METRIC_TOKENS) for n in names)
        if ok:
            satisfied += 1
        else:
            missing.append(f"expected outcome {outcome!r} absent from produced metrics")
    d = 2.5 * (satisfied / len(outcomes)) if outcomes else 2.5

    if a == 0.0 and d == 0.0:
        missing = [f"blocking: {m}" for m in missing]
        wrong = [f"blocking: {w}" for w in wrong]

    score = _round_half_up(a + b + c + d)
    return AlignmentReport(score, (a, b, c, d), tuple(missing), tuple(wrong))


def _default_executor(setup: OpticalSetup, plan: SimulationPlan, seed: int) -> MetricSet:
    return run_experiment(plan.key, setup=setup, params=plan.params, seed=seed)


def _default_refiner(
    setup: OpticalSetup, plan: SimulationPlan, record: RunRecord
) -> SimulationPlan | None:
    """Targeted corrections only: re-derive parameters, re-select the key.

    Never touches the setup itself; returns None when it has nothing left
    to change (which ends the loop early).
    """
    if record.status is RunStatus.REJECTED_PRE_RUN:
        return None
    report = record.alignment
    if report is None:
        return None
    if report.criterion_scores[0] == 0.0:
        suggestion = suggest_simulator_key(setup)
        if suggestion != plan.key:
            return SimulationPlan(suggestion, params_from_setup(suggestion, setup))
    if report.criterion_scores[2] < 2.5:
        rederived = params_from_setup(plan.key, setup)
        if rederived != plan.params:
            return SimulationPlan(plan.key, rederived)
    return None


@dataclass
class PipelineStages:
    classifier: Callable[[OpticalSetup], PhysicsDomain] = classify_domain
    linter: Callable[[OpticalSetup], ReviewVerdict] = lint_design
    executor: Callable[[OpticalSetup, SimulationPlan, int], MetricSet] = _default_executor
    scorer: Callable[[OpticalSetup, str, MetricSet], AlignmentReport] = score_alignment
    refiner: Callable[[OpticalSetup, SimulationPlan, RunRecord], SimulationPlan | None] = (
        _default_refiner
    )


def _run_with_watchdog(executor, setup, plan, seed, timeout_s: float) -> MetricSet:
    with ThreadPoolExecutor(max_workers=1) as pool:
        future = pool.submit(executor, setup, plan, seed)
        try:
            return future.result(timeout=timeout_s)
        except FutureTimeout:
            future.cancel()
            raise TimeoutError(f"simulator run exceeded the {timeout_s:.0f}s watchdog") from None


def run_pipeline(
    setup: OpticalSetup,
    plan: SimulationPlan | None = None,
    stages: PipelineStages | None = None,
    max_iterations: int = MAX_ITERATIONS,
    seed: int = 42,
    watchdog_s: float = WATCHDOG_SECONDS,
) -> tuple[RunRecord, list[RunRecord]]:
    """Classify, lint, execute, score; refine while the score is below 6.

    At most ``max_iterations`` simulator executions happen.  The returned
    record is the best-scoring one in history (earliest on ties), so a
    refinement step that makes things worse is effectively reverted.
    """
    stages = stages or PipelineStages()
    if plan is None:
        key = suggest_simulator_key(setup)
        plan = SimulationPlan(key, params_from_setup(key, setup))

    history: list[RunRecord] = []
    for iteration in range(1, max_iterations + 1):
        domain = stages.classifier(setup)
        verdict = stages.linter(setup)
        if not verdict.approved:
            record = RunRecord(
                iteration, domain, plan, verdict, RunStatus.REJECTED_PRE_RUN,
                failure="; ".join(verdict.concerns),
            )
        else:
            try:
                metrics = _run_with_watchdog(stages.executor, setup, plan, seed, watchdog_s)
            except Exception as exc:  # failure is data, not a crash
                record = RunRecord(
                    iteration, domain, plan, verdict, RunStatus.RUN_FAILED, failure=str(exc)
                )
            else:
                alignment = stages.scorer(setup, plan.key, metrics)
                record = RunRecord(
                    iteration, domain, plan, verdict, RunStatus.SCORED, metrics, alignment
                )
        history.append(record)
        if record.status is RunStatus.SCORED and record.score >= REFINEMENT_THRESHOLD:
            break
        if iteration == max_iterations:
            break
        refined = stages.refiner(setup, plan, record)
        if refined is None:
            break
        plan = refined

    best = max(history, key=lambda r: (r.score, -r.iteration))
    return best, history


def record_to_dict(record: RunRecord) -> dict:
    """JSON-ready view of one run record (metrics reduced to scalar map)."""
    out = {
        "iteration": record.iteration,
        "domain": record.domain.value,
        "simulator": record.plan.key,
        "status": record.status.value,
        "approved": record.verdict.approved,
        "confidence": record.verdict.confidence,
        "concerns": list(record.verdict.concerns),
        "failure": record.failure,
    }
    if record.alignment is not None:
        out["alignment"] = {
            "score": record.alignment.score,
            "criteria": list(record.alignment.criterion_scores),
            "missing_from_code": list(record.alignment.missing_from_code),
            "wrong_in_code": list(record.alignment.wrong_in_code),
        }
    if record.metrics is not None:
        out["scalars"] = dict(sorted(record.metrics.scalars.items()))
    return out
