"""Supply-power models for a virtualized base station and a macro baseline.

The virtualized station (VBS) splits into a baseband unit (BBU) running
on N_c general-purpose cores and an RF chain dominated by the power
amplifier. Per-core draw interpolates between an idle floor P_Bm and a
full-speed ceiling P_BM, growing with CPU utilization times clock speed
to the power beta. Baseband utilization itself has a fixed component
(coding, platform overhead) and a component linear in the data rate, so
the expanded busy power of the BBU is

    P_B(r) = N_c * P_Bm + dPB * c0 * s**(beta-1) + dPB * kappa * r * s**(beta-1)

with dPB = (P_BM - P_Bm) / s0**beta. The macro baseline follows the
affine EARTH-style model P0 + delta_p * p_out per transceiver.

All powers are watts, rates bit/s, energies joules.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InfeasibleLoadError, PowerCapExceededError
from .radio import tx_power_for_rate

# Tolerance for the load <= 1 feasibility check, so a rate computed from
# the exact capacity boundary does not trip on rounding.
_LOAD_SLACK = 1e-12


@dataclass(frozen=True)
class ComputeParams:
    """BBU compute platform. Speeds are instructions/s, c0 instructions/s,
    kappa instructions/bit."""

    n_cores: int = 1
    cpu_speed: float = 2e9
    ref_speed: float = 2e9
    p_core_max_w: float = 20.0
    p_core_min_w: float = 5.0
    beta: float = 2.0
    c0: float = 7e8
    kappa: float = 35.0

    def __post_init__(self) -> None:
        if self.n_cores < 1 or self.n_cores != int(self.n_cores):
            raise ValueError("n_cores must be a positive integer")
        if self.cpu_speed <= 0 or self.ref_speed <= 0:
            raise ValueError("core speeds must be positive")
        if not self.p_core_max_w > self.p_core_min_w >= 0:
            raise ValueError("need p_core_max_w > p_core_min_w >= 0")
        if self.beta < 1:
            raise ValueError("beta must be >= 1")
        if self.c0 < 0:
            raise ValueError("c0 must be nonnegative")
        if self.kappa <= 0:
            raise ValueError("kappa must be positive")


@dataclass(frozen=True)
class RadioParams:
    """RF chain of the VBS: amplifier efficiency, fixed RF overhead, the
    sleep-state draw of the whole station, and the energy cost of one
    sleep/wake transition."""

    pa_efficiency: float = 0.311
    p_rf_w: float = 12.9
    p_sleep_w: float = 6.45
    bandwidth_hz: float = 20e6
    switch_energy_j: float = 5.0
    p_out_max_w: float = math.inf

    def __post_init__(self) -> None:
        if not 0 < self.pa_efficiency <= 1:
            raise ValueError("pa_efficiency must be in (0, 1]")
        if self.p_rf_w < 0 or self.p_sleep_w < 0:
            raise ValueError("powers must be nonnegative")
        if self.bandwidth_hz <= 0:
            raise ValueError("bandwidth must be positive")
        if self.switch_energy_j < 0:
            raise ValueError("switch energy must be nonnegative")
        if self.p_out_max_w <= 0:
            raise ValueError("p_out_max_w must be positive")


@dataclass(frozen=True)
class EarthParams:
    """Affine macro-station baseline: per-TRX static draw plus a slope on
    transmit power, with its own sleep draw."""

    n_trx: int = 1
    p0_w: float = 84.0
    delta_p: float = 2.8
    p_sleep_w: float = 56.0
    p_out_max_w: float = math.inf

    def __post_init__(self) -> None:
        if self.n_trx < 1 or self.n_trx != int(self.n_trx):
            raise ValueError("n_trx must be a positive integer")
        if self.delta_p <= 0:
            raise ValueError("delta_p must be positive")
        if not self.p0_w > self.p_sleep_w >= 0:
            raise ValueError("need p0_w > p_sleep_w >= 0")
        if self.p_out_max_w <= 0:
            raise ValueError("p_out_max_w must be positive")


def delta_pb(c: ComputeParams) -> float:
    """Per-core power span normalized by the reference speed: the slope
    of core power against load * speed**beta."""
    return (c.p_core_max_w - c.p_core_min_w) / c.ref_speed ** c.beta


def cpu_load(c: ComputeParams, rate_bps, check: bool = True):
    """Average utilization per core at the given data rate.

    The value is (c0 + kappa * r) / (N_c * s). With check=True a load
    above 1 raises InfeasibleLoadError; with check=False the raw value
    is returned so callers can probe infeasible rates.
    """
    load = (c.c0 + c.kappa * np.asarray(rate_bps, dtype=float)) / (c.n_cores * c.cpu_speed)
    if check and np.any(load > 1.0 + _LOAD_SLACK):
        raise InfeasibleLoadError(
            f"rate needs load {np.max(load):.6g} > 1 on {c.n_cores} core(s)"
        )
    return float(load) if np.ndim(load) == 0 else load


def bbu_power(c: ComputeParams, rate_bps, check: bool = True):
    """BBU supply power at the given rate, in watts.

    Uses the expanded affine-in-rate form; composing per-core power with
    cpu_load gives the same value to rounding.
    """
    cpu_load(c, rate_bps, check=check)  # feasibility gate only
    dpb = delta_pb(c)
    s_pow = c.cpu_speed ** (c.beta - 1.0)
    p = c.n_cores * c.p_core_min_w + dpb * c.c0 * s_pow + dpb * c.kappa * np.asarray(rate_bps, dtype=float) * s_pow
    return float(p) if np.ndim(p) == 0 else p


def rrh_power(rp: RadioParams, p_out_w):
    """Radio head supply power: amplifier input p_out/eta plus fixed RF."""
    p_out = np.asarray(p_out_w, dtype=float)
    if np.any(p_out < 0):
        raise ValueError("transmit power must be nonnegative")
    if np.any(p_out > rp.p_out_max_w):
        raise PowerCapExceededError(
            f"transmit power {np.max(p_out):.6g} W above cap {rp.p_out_max_w:.6g} W"
        )
    p = p_out / rp.pa_efficiency + rp.p_rf_w
    return float(p) if np.ndim(p) == 0 else p


def static_power(c: ComputeParams, rp: RadioParams) -> float:
    """Rate-independent part of the VBS busy power (transmit power excluded)."""
    return c.n_cores * c.p_core_min_w + delta_pb(c) * c.c0 * c.cpu_speed ** (c.beta - 1.0) + rp.p_rf_w


def sleep_adjusted_power(c: ComputeParams, rp: RadioParams, arrival_rate: float) -> float:
    """Static busy power net of sleep draw and amortized switching cost.

    This is the constant that decides whether slowing down ever pays:
    static - sleep - 2 * arrival_rate * E_switch. It may be negative when
    switching is expensive relative to the static/sleep gap.
    """
    return static_power(c, rp) - rp.p_sleep_w - 2.0 * arrival_rate * rp.switch_energy_j


def vbs_busy_power(c: ComputeParams, rp: RadioParams, gain: float, rate_bps,
                   check: bool = True):
    """Total VBS supply power while serving at rate_bps."""
    p_out = tx_power_for_rate(gain, rp.bandwidth_hz, rate_bps)
    p = bbu_power(c, rate_bps, check=check) + rrh_power(rp, p_out)
    return float(p) if np.ndim(p) == 0 else p


def earth_busy_power(e: EarthParams, p_out_w):
    """Macro-baseline supply power at transmit power p_out_w."""
    p_out = np.asarray(p_out_w, dtype=float)
    if np.any(p_out < 0):
        raise ValueError("transmit power must be nonnegative")
    if np.any(p_out > e.p_out_max_w):
        raise PowerCapExceededError(
            f"transmit power {np.max(p_out):.6g} W above cap {e.p_out_max_w:.6g} W"
        )
    p = e.n_trx * e.p0_w + e.delta_p * p_out
    return float(p) if np.ndim(p) == 0 else p


@dataclass(frozen=True)
class BusyPowerProfile:
    """Busy power as a function of rate, plus the sleep-cycle constants.

    static_power_w and pa_efficiency describe the affine-plus-amplifier
    structure when the realization has one; the closed-form rate
    optimizer relies on them. They stay None for opaque profiles.
    """

    busy_power: Callable[[float], float]
    sleep_power_w: float
    switch_energy_j: float
    static_power_w: float | None = None
    pa_efficiency: float | None = None

    def __post_init__(self) -> None:
        if self.sleep_power_w < 0 or self.switch_energy_j < 0:
            raise ValueError("sleep power and switch energy must be nonnegative")


def vbs_profile(c: ComputeParams, rp: RadioParams, gain: float,
                check_load: bool = True) -> BusyPowerProfile:
    """Profile for the virtualized station. check_load=False disables the
    core-capacity gate, which grid searches use to probe past the cap."""
    return BusyPowerProfile(
        busy_power=lambda r: vbs_busy_power(c, rp, gain, r, check=check_load),
        sleep_power_w=rp.p_sleep_w,
        switch_energy_j=rp.switch_energy_j,
        static_power_w=static_power(c, rp),
        pa_efficiency=rp.pa_efficiency,
    )


def earth_profile(e: EarthParams, gain: float, bandwidth_hz: float,
                  switch_energy_j: float) -> BusyPowerProfile:
    """Profile for the macro baseline under the same sleep-cycle policy."""
    return BusyPowerProfile(
        busy_power=lambda r: earth_busy_power(e, tx_power_for_rate(gain, bandwidth_hz, r)),
        sleep_power_w=e.n_trx * e.p_sleep_w,
        switch_energy_j=switch_energy_j,
        static_power_w=e.n_trx * e.p0_w,
        pa_efficiency=1.0 / e.delta_p,
    )
