"""Line-of-sight optical channel model for seawater links.

Received power follows Beer-Lambert extinction along the slant path combined
with the geometric spreading of a diverging beam onto the receiver aperture.
Bit errors come from an OOK photon-counting receiver: dark counts and
background light set the photon rate for a transmitted 0, the signal adds on
top of it for a 1, and the error probability is the Gaussian-approximation
erfc expression over the two rates.  Multi-hop bit error rates compose with
the recursive odd-parity rule.

Everything here is a pure function of its inputs; no shared state, safe to
call from any number of threads.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import special as _special

PLANCK = 6.62607015e-34  # J*s
LIGHT_SPEED_VACUUM = 299792458.0  # m/s
#: Speed of light in seawater (vacuum speed / refractive index 1.33).
LIGHT_SPEED_WATER = 2.2541e8  # m/s

#: Below this value a bit error probability is reported as exactly 0.0 so
#: that subnormal noise never leaks into campaign aggregates.
BER_FLOOR = 1e-300


class WaterType(Enum):
    """Water classes with tabulated extinction coefficients."""

    CLEAR_OCEAN = "clear"
    COASTAL_OCEAN = "coastal"
    TURBID_HARBOR = "turbid"


_EXTINCTION_PER_M = {
    WaterType.CLEAR_OCEAN: 0.15,
    WaterType.COASTAL_OCEAN: 0.30,
    WaterType.TURBID_HARBOR: 2.19,
}


def extinction_coefficient(water: WaterType) -> float:
    """Tabulated extinction coefficient for a water type, in 1/m."""
    return _EXTINCTION_PER_M[water]


def extinction_from_components(absorption: float, scattering: float) -> float:
    """Total extinction as the sum of absorption and scattering, in 1/m."""
    if absorption < 0.0 or scattering < 0.0:
        raise ValueError(
            f"absorption and scattering must be >= 0, got {absorption}, {scattering}"
        )
    return absorption + scattering


@dataclass(frozen=True)
class ChannelParams:
    """Transmitter, receiver and water parameters of one optical link.

    Angles are radians, lengths meters, areas square meters, power watts.
    ``extinction`` defaults to the sum of ``absorption`` and ``scattering``
    when both are given, otherwise to the clear-ocean table value.
    """

    wavelength: float = 530e-9
    extinction: float | None = None
    absorption: float | None = None
    scattering: float | None = None
    tx_power: float = 0.1
    tx_efficiency: float = 0.9
    rx_efficiency: float = 0.9
    aperture_area: float = 0.17e-6
    trajectory_angle: float = math.radians(60.0)
    divergence_angle: float = math.radians(60.0)

    def __post_init__(self):
        if self.extinction is None:
            if self.absorption is not None and self.scattering is not None:
                resolved = extinction_from_components(self.absorption, self.scattering)
            else:
                resolved = _EXTINCTION_PER_M[WaterType.CLEAR_OCEAN]
            object.__setattr__(self, "extinction", resolved)
        elif self.absorption is not None and self.scattering is not None:
            total = extinction_from_components(self.absorption, self.scattering)
            if not math.isclose(self.extinction, total, rel_tol=1e-12, abs_tol=1e-15):
                raise ValueError(
                    f"extinction {self.extinction} != absorption + scattering {total}"
                )
        if self.wavelength <= 0.0:
            raise ValueError(f"wavelength must be > 0, got {self.wavelength}")
        if self.extinction < 0.0:
            raise ValueError(f"extinction must be >= 0, got {self.extinction}")
        if self.tx_power <= 0.0:
            raise ValueError(f"tx_power must be > 0, got {self.tx_power}")
        if self.aperture_area <= 0.0:
            raise ValueError(f"aperture_area must be > 0, got {self.aperture_area}")
        for name in ("tx_efficiency", "rx_efficiency"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        if not 0.0 <= self.trajectory_angle < math.pi / 2.0:
            raise ValueError(
                f"trajectory_angle must be in [0, pi/2), got {self.trajectory_angle}"
            )
        if not 0.0 < self.divergence_angle <= math.pi:
            raise ValueError(
                f"divergence_angle must be in (0, pi], got {self.divergence_angle}"
            )

    @classmethod
    def for_water(cls, water: WaterType, **overrides) -> "ChannelParams":
        """Parameters with the extinction coefficient of the given water type."""
        overrides.setdefault("extinction", extinction_coefficient(water))
        return cls(**overrides)


@dataclass(frozen=True)
class ReceiverNoise:
    """Photon-counting receiver characteristics.

    Rates are counts per second, ``pulse_duration`` seconds, ``data_rate``
    bits per second.
    """

    dark_count_rate: float = 1e6
    background_rate: float = 1e6
    detector_efficiency: float = 0.9
    pulse_duration: float = 1e-9
    data_rate: float = 1e6

    def __post_init__(self):
        if self.dark_count_rate < 0.0 or self.background_rate < 0.0:
            raise ValueError("noise rates must be >= 0")
        if not 0.0 <= self.detector_efficiency <= 1.0:
            raise ValueError(
                f"detector_efficiency must be in [0, 1], got {self.detector_efficiency}"
            )
        if self.pulse_duration <= 0.0:
            raise ValueError(f"pulse_duration must be > 0, got {self.pulse_duration}")
        if self.data_rate <= 0.0:
            raise ValueError(f"data_rate must be > 0, got {self.data_rate}")


@dataclass(frozen=True)
class PhysicalConstants:
    planck: float = PLANCK
    light_speed_water: float = LIGHT_SPEED_WATER

    def __post_init__(self):
        if self.planck <= 0.0 or self.light_speed_water <= 0.0:
            raise ValueError("physical constants must be > 0")
        if self.light_speed_water >= LIGHT_SPEED_VACUUM:
            raise ValueError(
                f"light_speed_water must be below the vacuum speed, "
                f"got {self.light_speed_water}"
            )


def received_power_los(params: ChannelParams, distance: float) -> float:
    """Received optical power of a line-of-sight link, in watts.

    Strictly decreasing in distance, extinction and divergence angle.
    Raises ValueError for a non-positive distance (inverse-square
    singularity at zero).
    """
    if distance <= 0.0:
        raise ValueError(f"distance must be > 0, got {distance}")
    cos_traj = math.cos(params.trajectory_angle)
    attenuation = math.exp(-params.extinction * distance / cos_traj)
    spreading = params.aperture_area * cos_traj / (
        2.0 * math.pi * (1.0 - math.cos(params.divergence_angle)) * distance * distance
    )
    return (
        params.tx_power
        * params.tx_efficiency
        * params.rx_efficiency
        * attenuation
        * spreading
    )


def photon_arrival_rate(
    received_power: float,
    noise: ReceiverNoise,
    params: ChannelParams,
    constants: PhysicalConstants,
) -> float:
    """Signal photon arrival rate at the detector, counts per second."""
    if received_power < 0.0:
        raise ValueError(f"received_power must be >= 0, got {received_power}")
    return (received_power * noise.detector_efficiency * params.wavelength) / (
        noise.pulse_duration
        * noise.data_rate
        * constants.planck
        * constants.light_speed_water
    )


def single_link_ber(
    received_power: float,
    noise: ReceiverNoise,
    params: ChannelParams,
    constants: PhysicalConstants,
) -> float:
    """Bit error probability of one OOK link, in [0, 0.5].

    Zero received power means the photon rates for a 0 and a 1 coincide and
    the result is chance level 0.5.  Values below ``BER_FLOOR`` are clamped
    to exactly 0.0.
    """
    rate_signal = photon_arrival_rate(received_power, noise, params, constants)
    rate_zero = noise.dark_count_rate + noise.background_rate
    rate_one = rate_zero + rate_signal
    denom = math.sqrt(rate_one) + math.sqrt(rate_zero)
    # sqrt(r1) - sqrt(r0) evaluated as rp / (sqrt(r1) + sqrt(r0)) to avoid
    # cancellation when the signal rate is far below the noise rates.
    diff = rate_signal / denom if denom > 0.0 else 0.0
    ber = 0.5 * math.erfc(math.sqrt(noise.pulse_duration / 2.0) * diff)
    return 0.0 if ber < BER_FLOOR else ber


def chain_ber(upstream_ber: float, link_ber: float) -> float:
    """Fold one more hop into an end-to-end bit error probability.

    A bit arrives wrong when exactly one of (upstream path, new link)
    flips it; two flips cancel.
    """
    for name, value in (("upstream_ber", upstream_ber), ("link_ber", link_ber)):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} must be in [0, 1], got {value}")
    return (1.0 - upstream_ber) * link_ber + (1.0 - link_ber) * upstream_ber


def e2e_ber(link_bers) -> float:
    """End-to-end bit error probability of a hop sequence (empty -> 0.0)."""
    total = 0.0
    for ber in link_bers:
        total = chain_ber(total, ber)
    return total


def link_power_and_ber(
    distances,
    params: ChannelParams,
    noise: ReceiverNoise,
    constants: PhysicalConstants,
):
    """Vectorised received power and single-link BER for many link lengths.

    Same model as `received_power_los` / `single_link_ber`, evaluated with
    numpy over an array of distances.  Used by the graph builder so that a
    trial prices all its candidate edges in one shot.
    """
    d = np.asarray(distances, dtype=float)
    if np.any(d <= 0.0):
        raise ValueError("all distances must be > 0")
    cos_traj = math.cos(params.trajectory_angle)
    power = (
        params.tx_power
        * params.tx_efficiency
        * params.rx_efficiency
        * np.exp(-params.extinction * d / cos_traj)
        * params.aperture_area
        * cos_traj
        / (2.0 * math.pi * (1.0 - math.cos(params.divergence_angle)) * d * d)
    )
    rate_signal = (power * noise.detector_efficiency * params.wavelength) / (
        noise.pulse_duration
        * noise.data_rate
        * constants.planck
        * constants.light_speed_water
    )
    rate_zero = noise.dark_count_rate + noise.background_rate
    denom = np.sqrt(rate_zero + rate_signal) + math.sqrt(rate_zero)
    diff = np.divide(
        rate_signal, denom, out=np.zeros_like(rate_signal), where=denom > 0.0
    )
    ber = 0.5 * _special.erfc(math.sqrt(noise.pulse_duration / 2.0) * diff)
    ber = np.where(ber < BER_FLOOR, 0.0, ber)
    return power, ber
