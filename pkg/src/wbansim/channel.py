"""Log-distance path loss with optional log-normal shadowing.

Loss in dB at distance d from a transmitter is

    PL(d) = PL0 + 10 * n * log10(d / d0) + X_sigma

where PL0 is the free-space loss at the reference distance d0 and n is the
path-loss exponent of the link class (on-body line of sight, non line of
sight, or free space). X_sigma is a zero-mean Gaussian shadowing term drawn
by the caller, so this module holds no random state.

PL0 is computed as 20*log10(4*pi*d0*f / c), the standard free-space form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

SPEED_OF_LIGHT = 299792458.0


class LinkClass(Enum):
    LOS = "los"
    NLOS = "nlos"
    FREE_SPACE = "free_space"


@dataclass(frozen=True)
class ChannelParams:
    frequency: float = 2.4e9
    d0: float = 0.1
    exponent_los: float = 3.5
    exponent_nlos: float = 6.0
    exponent_free: float = 2.0
    sigma_db: float = 0.0
    k_freq: float = 1.0
    c: float = field(default=SPEED_OF_LIGHT)

    def exponent(self, link: LinkClass) -> float:
        if link is LinkClass.LOS:
            return self.exponent_los
        if link is LinkClass.NLOS:
            return self.exponent_nlos
        return self.exponent_free

    def validate(self) -> list[str]:
        problems = []
        if self.frequency <= 0:
            problems.append("channel.frequency: must be > 0")
        if self.d0 <= 0:
            problems.append("channel.d0: must be > 0")
        if not (2.0 <= self.exponent_los <= 4.0):
            problems.append("channel.exponent_los: must lie in [2, 4]")
        if not (5.0 <= self.exponent_nlos <= 7.4):
            problems.append("channel.exponent_nlos: must lie in [5, 7.4]")
        if self.sigma_db < 0:
            problems.append("channel.sigma_db: must be >= 0")
        return problems


def reference_path_loss(p: ChannelParams) -> float:
    """Free-space loss at the reference distance, in dB."""
    return 20.0 * math.log10(4.0 * math.pi * p.d0 * p.frequency / p.c)


def path_loss(p: ChannelParams, d: float, link: LinkClass = LinkClass.LOS,
              shadow_sample: float = 0.0) -> float:
    """Loss in dB over a link of length ``d`` meters.

    ``shadow_sample`` is the caller-drawn Normal(0, sigma_db) shadowing term
    (pass 0 when shadowing is disabled).
    """
    if d <= 0:
        raise ValueError(f"path_loss requires d > 0, got {d}")
    n = p.exponent(link)
    return reference_path_loss(p) + 10.0 * n * math.log10(d / p.d0) + shadow_sample


def frequency_factor(p: ChannelParams, f: float, f_ref: float) -> float:
    """Linear-scale loss ratio between carrier ``f`` and reference ``f_ref``.

    The amplitude-domain loss scales with f**k, so power-domain loss scales
    with the square: (f / f_ref) ** (2 * k).
    """
    if f <= 0 or f_ref <= 0:
        raise ValueError("frequencies must be > 0")
    return (f / f_ref) ** (2.0 * p.k_freq)
