"""Padding a threshold count up to a power of two.

A machine with ``g`` accepting paths (out of at most ``t``) is padded with
``2^(1+w) - f`` paths that accept immediately. The total is a power of two
exactly when ``g == f``, as long as ``2^w`` exceeds both ``f`` and ``t``.
"""
import logging

from pydantic import BaseModel, ConfigDict, model_validator


__all__ = [
    "PaddingInstance",
    "PaddingReport",
    "SweepVerdict",
    "is_power_of_two",
    "pad_width",
    "padding_total",
    "padding_width",
    "padded_count",
    "pad",
    "padding_sweep",
]

logger = logging.getLogger(__name__)


def is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


class PaddingInstance(BaseModel):
    model_config = ConfigDict(frozen=True)

    f: int
    g: int
    t: int

    @model_validator(mode="after")
    def validate_counts(self):
        if self.f < 0:
            msg = f"Target count must be non-negative, got f={self.f}"
            raise ValueError(msg)
        if not 0 <= self.g <= self.t:
            msg = f"Accepting paths must satisfy 0 <= g <= t, got g={self.g}, t={self.t}"
            raise ValueError(msg)
        return self


class PaddingReport(BaseModel):
    w: int
    total: int
    power_of_two: bool


def padding_width(f: int, t: int) -> int:
    # smallest w with 2^w > max(f, t); bounding t as well keeps g - f below 2^(1+w)
    return max(f, t).bit_length()


def padding_total(f: int, g: int, t: int) -> int:
    return (1 << (1 + padding_width(f, t))) - f + g


def pad_width(inst: PaddingInstance) -> int:
    return padding_width(inst.f, inst.t)


def padded_count(inst: PaddingInstance) -> int:
    return padding_total(inst.f, inst.g, inst.t)


def pad(inst: PaddingInstance) -> PaddingReport:
    total = padded_count(inst)
    return PaddingReport(w=pad_width(inst), total=total, power_of_two=is_power_of_two(total))


class SweepVerdict(BaseModel):
    passed: bool
    limit: int
    checked: int
    counterexamples: list[PaddingInstance] = []


def padding_sweep(limit: int, max_counterexamples: int = 10) -> SweepVerdict:
    """Check every ``0 <= f <= limit`` and ``0 <= g <= t <= limit``.

    Each instance is padded with :func:`padding_total` and must land strictly
    between ``2^w`` and ``2^(w+2)``, on a power of two exactly when ``g == f``.
    """
    checked = 0
    counterexamples = []
    for t in range(limit + 1):
        for f in range(limit + 1):
            w = padding_width(f, t)
            (low, high) = (1 << w, 1 << (w + 2))
            for g in range(t + 1):
                total = padding_total(f, g, t)
                checked += 1
                if is_power_of_two(total) == (g == f) and low < total < high:
                    continue
                if len(counterexamples) < max_counterexamples:
                    counterexamples.append(PaddingInstance(f=f, g=g, t=t))
    logger.debug("padding sweep up to %d checked %d instances", limit, checked)
    return SweepVerdict(passed=not counterexamples, limit=limit, checked=checked, counterexamples=counterexamples)
