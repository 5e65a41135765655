"""Flow-level queueing model with sleep cycles.

Flows arrive as a Poisson process and share the downlink rate r as a
processor-sharing queue, so only the mean file size matters. While the
system is empty the station sleeps; the first arrival of a cycle wakes
it. Waking and falling asleep each cost E_switch joules, charged as
2 * E_switch per cycle.

Average power therefore mixes busy and sleep draw by the utilization and
adds the switching energy over the mean cycle length:

    E{P} = rho * P_busy(r) + (1 - rho) * P_sleep + 2 E_sw * lambda (1 - rho)

The planning objective adds a delay penalty through the mean number of
flows in the system: z = E{P} + alpha * E{n}.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnstableQueueError
from .power import BusyPowerProfile


@dataclass(frozen=True)
class TrafficParams:
    """Poisson flow arrivals (per second) with mean file size in bits."""

    arrival_rate: float = 1.0
    file_size_bits: float = 1.6e7

    def __post_init__(self) -> None:
        if self.arrival_rate <= 0:
            raise ValueError("arrival rate must be positive")
        if self.file_size_bits <= 0:
            raise ValueError("file size must be positive")

    @property
    def offered_load_bps(self) -> float:
        """Arriving work in bit/s; the service rate must exceed this."""
        return self.arrival_rate * self.file_size_bits


@dataclass(frozen=True)
class QueueMetrics:
    """Stationary metrics of the sleep-cycled processor-sharing queue."""

    rho: float
    mean_queue_len: float
    mean_delay_s: float
    mean_cycle_s: float
    active_fraction: float
    sleep_fraction: float


def _check_stable(t: TrafficParams, rate_bps) -> None:
    if np.any(np.asarray(rate_bps) <= t.offered_load_bps):
        raise UnstableQueueError(
            f"rate must exceed the offered load {t.offered_load_bps:.6g} bit/s"
        )


def queue_metrics(t: TrafficParams, rate_bps) -> QueueMetrics:
    """Utilization, mean flows in system, mean delay, and mean cycle length.

    Accepts a scalar or an array rate; metrics broadcast accordingly.
    """
    _check_stable(t, rate_bps)
    rho = t.offered_load_bps / rate_bps
    mean_n = rho / (1.0 - rho)
    mean_delay = mean_n / t.arrival_rate
    mean_cycle = 1.0 / (t.arrival_rate * (1.0 - rho))
    return QueueMetrics(
        rho=rho,
        mean_queue_len=mean_n,
        mean_delay_s=mean_delay,
        mean_cycle_s=mean_cycle,
        active_fraction=rho,
        sleep_fraction=1.0 - rho,
    )


def average_power(profile: BusyPowerProfile, t: TrafficParams, rate_bps):
    """Long-run average supply power at service rate rate_bps."""
    _check_stable(t, rate_bps)
    rho = t.offered_load_bps / rate_bps
    p = (
        rho * profile.busy_power(rate_bps)
        + (1.0 - rho) * profile.sleep_power_w
        + 2.0 * profile.switch_energy_j * t.arrival_rate * (1.0 - rho)
    )
    return float(p) if np.ndim(p) == 0 else p


def system_cost(profile: BusyPowerProfile, t: TrafficParams, alpha: float, rate_bps):
    """Average power plus alpha times the mean number of flows in system.

    alpha is watts per queued flow; alpha = 0 reduces to average_power.
    Note that raising the core count at a fixed rate adds exactly
    rho * P_core_min to the cost, the idle floor of the extra core
    weighted by the time it is powered.
    """
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    _check_stable(t, rate_bps)
    rho = t.offered_load_bps / rate_bps
    z = average_power(profile, t, rate_bps) + alpha * rho / (1.0 - rho)
    return float(z) if np.ndim(z) == 0 else z
