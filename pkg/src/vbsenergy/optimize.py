"""Operating-point optimization: service rate and core count.

For a fixed core count the cost z(r) = E{P}(r) + alpha * E{n}(r) has at
most one interior stationary point in the stable region r > lambda * L.
Setting dz/dr = 0 and substituting u = r ln2 / W - 1 gives a Lambert W
equation, so the stationarity condition can be written as a gap

    gap(r) = W0(a(r)) - (r ln2 / W - 1),
    a(r) = alpha g eta / e * (r / (r - lambda L))**2 + (g eta P_s - 1) / e,

which is strictly decreasing in r; its root is the cost minimizer. At
alpha = 0 the argument is constant and the root has the closed form

    r_e = W / ln2 * (W0((g eta P_s - 1) / e) + 1),

which exists inside the stable region iff P_s > 0 and lambda L < r_e.
P_s is the sleep-adjusted static power, so r_e depends on neither the
rate-linear BBU load coefficient kappa nor on alpha.

The joint search over core counts walks N_c upward: once the fixed-N_c
minimizer is achievable within the core capacity, larger N_c only add
idle-floor power, so the walk stops there and picks the cheapest
candidate collected so far.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    ConvergenceError,
    InfeasibleLoadError,
    InfeasibleScenarioError,
    NoEnergyOptimumError,
    NoStationaryPointError,
    UnstableQueueError,
)
from .lambertw import BRANCH_POINT_ARG, lambert_w0
from .power import (
    BusyPowerProfile,
    ComputeParams,
    EarthParams,
    RadioParams,
    delta_pb,
    sleep_adjusted_power,
    static_power,
    vbs_profile,
)
from .queueing import TrafficParams, average_power, queue_metrics
from .radio import LN2, LinkBudget

# Costs within this relative band are treated as ties; the smaller core
# count wins a tie.
TIE_REL_TOL = 1e-9

# Rates are searched in (offered_load * (1 + STABILITY_MARGIN), r_max].
STABILITY_MARGIN = 1e-9

_BISECT_RTOL = 1e-12
_MAX_BRACKET_DOUBLINGS = 200
_MAX_BISECT_ITER = 500


@dataclass(frozen=True)
class Scenario:
    """Everything needed to evaluate one station: compute platform, RF
    chain, link budget, traffic, and the delay penalty alpha (W/flow)."""

    compute: ComputeParams = ComputeParams()
    radio: RadioParams = RadioParams()
    link: LinkBudget = LinkBudget()
    traffic: TrafficParams = TrafficParams()
    alpha: float = 0.0

    def __post_init__(self) -> None:
        if self.alpha < 0:
            raise ValueError("alpha must be nonnegative")
        if self.radio.bandwidth_hz != self.link.bandwidth_hz:
            raise ValueError(
                "radio and link bandwidth disagree; build both from one value"
            )

    def with_cores(self, n_cores: int) -> "Scenario":
        return replace(self, compute=replace(self.compute, n_cores=n_cores))


@dataclass(frozen=True)
class TradeoffPoint:
    """One evaluated operating point on the energy-delay tradeoff."""

    rate_bps: float
    n_cores: int
    rho: float
    mean_queue_len: float
    mean_delay_s: float
    avg_power_w: float
    cost_z: float


@dataclass(frozen=True)
class CurvePoint:
    """Tradeoff-curve sample; point is None when status is not 'ok'."""

    target_delay_s: float
    status: str
    point: TradeoffPoint | None


@dataclass(frozen=True)
class ExistenceResult:
    """Whether a finite-delay power minimum exists, and why not.

    arrival_rate_bound is the largest arrival rate that keeps the
    sleep-adjusted static power positive; file_size_bound is the mean
    size bound (bits) below which the minimizer stays in the stable
    region, or None when the first condition already fails.
    """

    exists: bool
    reason: str | None
    arrival_rate_bound: float
    file_size_bound: float | None

    def __bool__(self) -> bool:
        return self.exists


@dataclass(frozen=True)
class JointResult:
    """Winner of the joint rate/core search plus every candidate tried."""

    rate_bps: float
    n_cores: int
    point: TradeoffPoint
    candidates: tuple[TradeoffPoint, ...]


def max_supportable_rate(c: ComputeParams) -> float:
    """Largest rate the cores can decode: load reaches 1 exactly there."""
    r_max = (c.n_cores * c.cpu_speed - c.c0) / c.kappa
    if r_max <= 0:
        raise InfeasibleLoadError(
            f"{c.n_cores} core(s) cannot even run the rate-independent load"
        )
    return r_max


def cores_needed(c: ComputeParams, rate_bps: float) -> int:
    """Smallest core count whose capacity covers rate_bps."""
    if rate_bps < 0:
        raise ValueError("rate must be nonnegative")
    need = (c.c0 + c.kappa * rate_bps) / c.cpu_speed
    return max(1, math.ceil(need - 1e-12))


def scenario_profile(sc: Scenario, n_cores: int | None = None,
                     check_load: bool = True) -> BusyPowerProfile:
    """VBS busy-power profile for the scenario at the given core count."""
    c = sc.compute if n_cores is None else replace(sc.compute, n_cores=n_cores)
    return vbs_profile(c, sc.radio, sc.link.channel_gain, check_load=check_load)


def evaluate_point(sc: Scenario, rate_bps: float, n_cores: int | None = None) -> TradeoffPoint:
    """Evaluate queueing metrics, power, and cost at one operating point."""
    n = sc.compute.n_cores if n_cores is None else n_cores
    profile = scenario_profile(sc, n)
    qm = queue_metrics(sc.traffic, rate_bps)
    power = average_power(profile, sc.traffic, rate_bps)
    cost = power + sc.alpha * qm.mean_queue_len
    return TradeoffPoint(
        rate_bps=float(rate_bps),
        n_cores=n,
        rho=qm.rho,
        mean_queue_len=qm.mean_queue_len,
        mean_delay_s=qm.mean_delay_s,
        avg_power_w=power,
        cost_z=cost,
    )


def _gap_terms(sc: Scenario, n_cores: int | None):
    c = sc.compute if n_cores is None else replace(sc.compute, n_cores=n_cores)
    g_eta = sc.link.channel_gain * sc.radio.pa_efficiency
    p_s = sleep_adjusted_power(c, sc.radio, sc.traffic.arrival_rate)
    return g_eta, p_s


def optimality_gap(sc: Scenario, rate_bps: float, n_cores: int | None = None) -> float:
    """Signed stationarity gap at rate_bps; positive while the cost is
    still falling, zero at the interior minimizer.

    Raises NoStationaryPointError when the Lambert argument falls below
    -1/e at this rate, meaning the cost is rising here and no interior
    stationary point lies at or beyond rate_bps.
    """
    load = sc.traffic.offered_load_bps
    if rate_bps <= load:
        raise UnstableQueueError(
            f"rate must exceed the offered load {load:.6g} bit/s"
        )
    g_eta, p_s = _gap_terms(sc, n_cores)
    w_arg = (
        sc.alpha * g_eta / math.e * (rate_bps / (rate_bps - load)) ** 2
        + (g_eta * p_s - 1.0) / math.e
    )
    if w_arg < BRANCH_POINT_ARG:
        raise NoStationaryPointError(
            "cost derivative has no root at or beyond this rate"
        )
    bandwidth = sc.link.bandwidth_hz
    return lambert_w0(w_arg) - (rate_bps * LN2 / bandwidth - 1.0)


def _closed_form_rate(p_static: float, sleep_w: float, eta_eff: float,
                      gain: float, bandwidth_hz: float, switch_energy_j: float,
                      t: TrafficParams) -> float:
    """Energy-minimizing rate for a busy power of the shape
    static + p_out/eta + slope * r. Raises NoEnergyOptimumError with the
    failed condition when no finite-delay minimum exists."""
    p_s = p_static - sleep_w - 2.0 * t.arrival_rate * switch_energy_j
    if p_s <= 0:
        bound = _arrival_bound(p_static, sleep_w, switch_energy_j)
        raise NoEnergyOptimumError(
            f"switching cost dominates: arrival rate must stay below {bound:.6g}/s",
            reason="arrival_rate",
        )
    w_arg = (gain * eta_eff * p_s - 1.0) / math.e
    r_e = bandwidth_hz / LN2 * (lambert_w0(w_arg) + 1.0)
    if t.offered_load_bps >= r_e:
        raise NoEnergyOptimumError(
            f"offered load {t.offered_load_bps:.6g} bit/s at or above the "
            f"minimizer {r_e:.6g} bit/s; power only falls as delay grows",
            reason="file_size",
        )
    return r_e


def _arrival_bound(p_static: float, sleep_w: float, switch_energy_j: float) -> float:
    if switch_energy_j == 0:
        return math.inf
    return (p_static - sleep_w) / (2.0 * switch_energy_j)


def energy_optimal_exists(sc: Scenario, n_cores: int | None = None) -> ExistenceResult:
    """Check the two conditions for a finite-delay power minimum.

    First the arrival rate must keep the sleep-adjusted static power
    positive; then the offered load must sit below the closed-form
    minimizer. The reported bounds make both checks reproducible.
    """
    c = sc.compute if n_cores is None else replace(sc.compute, n_cores=n_cores)
    p_static = static_power(c, sc.radio)
    lam_bound = _arrival_bound(p_static, sc.radio.p_sleep_w, sc.radio.switch_energy_j)
    g_eta, p_s = _gap_terms(sc, n_cores)
    if p_s <= 0:
        return ExistenceResult(False, "arrival_rate", lam_bound, None)
    w_arg = (g_eta * p_s - 1.0) / math.e
    r_e = sc.link.bandwidth_hz / LN2 * (lambert_w0(w_arg) + 1.0)
    size_bound = r_e / sc.traffic.arrival_rate
    if sc.traffic.file_size_bits >= size_bound:
        return ExistenceResult(False, "file_size", lam_bound, size_bound)
    return ExistenceResult(True, None, lam_bound, size_bound)


def energy_optimal_rate(sc: Scenario, n_cores: int | None = None) -> float:
    """Closed-form rate minimizing average power for a fixed core count.

    Independent of kappa and of alpha. Raises NoEnergyOptimumError when
    no finite-delay minimum exists.
    """
    c = sc.compute if n_cores is None else replace(sc.compute, n_cores=n_cores)
    return _closed_form_rate(
        static_power(c, sc.radio),
        sc.radio.p_sleep_w,
        sc.radio.pa_efficiency,
        sc.link.channel_gain,
        sc.link.bandwidth_hz,
        sc.radio.switch_energy_j,
        sc.traffic,
    )


def earth_energy_optimal_rate(e: EarthParams, gain: float, bandwidth_hz: float,
                              switch_energy_j: float, t: TrafficParams) -> float:
    """Energy-minimizing rate of the macro baseline under the same sleep
    policy; its amplifier term enters through 1/delta_p."""
    return _closed_form_rate(
        e.n_trx * e.p0_w,
        e.n_trx * e.p_sleep_w,
        1.0 / e.delta_p,
        gain,
        bandwidth_hz,
        switch_energy_j,
        t,
    )


def asymptotic_power(sc: Scenario, n_cores: int | None = None) -> float:
    """Average power in the infinite-delay limit r -> offered load.

    The utilization tends to 1, so sleep and switching vanish and only
    the static draw, the rate-linear BBU term at the offered load, and
    the amplifier power of the slowest stable rate remain. Two traffic
    mixes with equal offered load share this value.
    """
    c = sc.compute if n_cores is None else replace(sc.compute, n_cores=n_cores)
    load = sc.traffic.offered_load_bps
    g_eta = sc.link.channel_gain * sc.radio.pa_efficiency
    bbu_linear = delta_pb(c) * c.kappa * c.cpu_speed ** (c.beta - 1.0) * load
    amp = (2.0 ** (load / sc.link.bandwidth_hz) - 1.0) / g_eta
    return static_power(c, sc.radio) + bbu_linear + amp


def solve_optimal_rate(sc: Scenario, n_cores: int | None = None) -> float:
    """Rate minimizing z(r) for a fixed core count, ignoring core capacity.

    At alpha = 0 this is exactly the closed form; otherwise the unique
    root of the stationarity gap is bracketed by doubling and refined by
    bisection to 1e-12 relative width. Bisection is deliberate: the gap
    is monotone, so convergence is unconditional.
    """
    if sc.alpha == 0.0:
        return energy_optimal_rate(sc, n_cores)

    load = sc.traffic.offered_load_bps

    def gap(r: float) -> float:
        return optimality_gap(sc, r, n_cores)

    # The gap blows up to +inf at the stability boundary; walk the lower
    # end inward until it is positive.
    eps = 1e-6
    lo = load * (1.0 + eps)
    while gap(lo) <= 0.0:
        eps *= 1e-3
        if eps < 1e-15:
            raise NoStationaryPointError(
                "no stationary rate above the stability boundary"
            )
        lo = load * (1.0 + eps)

    hi = lo * 2.0
    for _ in range(_MAX_BRACKET_DOUBLINGS):
        if gap(hi) < 0.0:
            break
        hi *= 2.0
    else:
        raise ConvergenceError("failed to bracket the stationary rate")

    for _ in range(_MAX_BISECT_ITER):
        mid = 0.5 * (lo + hi)
        if (hi - lo) <= _BISECT_RTOL * mid:
            return mid
        if gap(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    raise ConvergenceError("bisection failed to converge")


def best_rate_for_cores(sc: Scenario, n_cores: int) -> float:
    """Best achievable rate for a fixed core count: the interior optimum
    when it fits under the core capacity, else the capacity itself."""
    r_cap = max_supportable_rate(replace(sc.compute, n_cores=n_cores))
    load = sc.traffic.offered_load_bps
    if r_cap <= load * (1.0 + STABILITY_MARGIN):
        raise InfeasibleScenarioError(
            f"{n_cores} core(s) cannot reach a stable rate for this load"
        )
    try:
        r_hat = solve_optimal_rate(sc, n_cores)
    except (NoEnergyOptimumError, NoStationaryPointError):
        # No interior minimum: cost falls toward the open stability
        # boundary, so the only usable candidate is the capacity clamp.
        return r_cap
    return min(r_hat, r_cap)


def joint_optimize(sc: Scenario, n_cores_max: int) -> JointResult:
    """Jointly pick service rate and core count.

    Walks N_c = 1 .. n_cores_max. While the fixed-N_c minimizer exceeds
    the core capacity, the capacity point is kept as a candidate and the
    walk continues; once the minimizer becomes achievable it is added
    and the walk stops, because further cores only add idle-floor power.
    Ties within 1e-9 relative cost go to the smaller core count.
    """
    if n_cores_max < 1:
        raise ValueError("n_cores_max must be at least 1")
    load = sc.traffic.offered_load_bps
    candidates: list[TradeoffPoint] = []
    for n in range(1, n_cores_max + 1):
        c_n = replace(sc.compute, n_cores=n)
        if c_n.n_cores * c_n.cpu_speed <= c_n.c0:
            continue  # cannot run the rate-independent load at all
        r_cap = max_supportable_rate(c_n)
        if r_cap <= load * (1.0 + STABILITY_MARGIN):
            continue  # unstable even at full tilt
        try:
            r_hat = solve_optimal_rate(sc, n)
        except (NoEnergyOptimumError, NoStationaryPointError):
            r_hat = None
        if r_hat is not None and r_hat <= r_cap:
            candidates.append(evaluate_point(sc, r_hat, n))
            break
        candidates.append(evaluate_point(sc, r_cap, n))

    if not candidates:
        raise InfeasibleScenarioError(
            f"no stable operating point with up to {n_cores_max} core(s) "
            f"for offered load {load:.6g} bit/s"
        )

    best_cost = min(p.cost_z for p in candidates)
    for p in candidates:  # ascending core count, so first tie wins
        if p.cost_z <= best_cost * (1.0 + TIE_REL_TOL):
            return JointResult(p.rate_bps, p.n_cores, p, tuple(candidates))
    raise AssertionError("unreachable")


def rate_for_delay(t: TrafficParams, target_delay_s: float) -> float:
    """Service rate that yields the target mean delay."""
    if target_delay_s <= 0:
        raise ValueError("target delay must be positive")
    return t.offered_load_bps + t.file_size_bits / target_delay_s


def tradeoff_curve(sc: Scenario, delay_grid, n_cores: int | None = None) -> list[CurvePoint]:
    """Evaluate the scenario along a grid of target mean delays.

    n_cores fixes the core count; None picks the smallest sufficient
    count per point. Infeasible points are flagged, not dropped.
    """
    points: list[CurvePoint] = []
    for d in np.asarray(delay_grid, dtype=float):
        d = float(d)
        if d <= 0:
            points.append(CurvePoint(d, "invalid-delay", None))
            continue
        r = rate_for_delay(sc.traffic, d)
        n = cores_needed(sc.compute, r) if n_cores is None else n_cores
        try:
            points.append(CurvePoint(d, "ok", evaluate_point(sc, r, n)))
        except InfeasibleLoadError:
            points.append(CurvePoint(d, "over-compute-cap", None))
        except UnstableQueueError:
            points.append(CurvePoint(d, "unstable", None))
        except ValueError:
            # the spectral-efficiency guard: the link cannot carry this rate
            points.append(CurvePoint(d, "over-link-cap", None))
    return points


def power_savings(profile_a: BusyPowerProfile, profile_b: BusyPowerProfile,
                  t: TrafficParams, rate_bps: float) -> tuple[float, float, float]:
    """Average powers of two profiles at the same operating point and the
    savings fraction of a relative to b."""
    p_a = average_power(profile_a, t, rate_bps)
    p_b = average_power(profile_b, t, rate_bps)
    return p_a, p_b, 1.0 - p_a / p_b
