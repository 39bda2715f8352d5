"""Two-component wave functions on the integer line.

A walker prepared at the origin and evolved for ``t`` steps lives on the
window ``n = -t .. t`` with one complex amplitude per chirality component.
Amplitudes outside the window are identically zero, and a walker started
from a single site only populates sites with ``n + t`` even.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "InitialState",
    "SpinorField",
    "localized_state",
    "save_spinor_csv",
    "load_spinor_csv",
]

SPINOR_CSV_HEADER = "n,re_plus,im_plus,re_minus,im_minus"


@dataclass(frozen=True)
class InitialState:
    """Origin spinor ``(cos(eta), e^{i*gamma} sin(eta))``.

    ``eta`` sets the weight balance between the two chirality components,
    ``gamma`` their relative phase.
    """

    eta: float = 0.0
    gamma: float = 0.0


@dataclass(frozen=True, eq=False)
class SpinorField:
    """Walker state at a fixed time ``t``.

    ``plus_amps[i]`` and ``minus_amps[i]`` hold the two components at site
    ``n = i - t``; both arrays span the full reachable window ``-t .. t``.
    Instances are immutable: the amplitude arrays are copied on construction
    and marked read-only.
    """

    t: int
    plus_amps: np.ndarray
    minus_amps: np.ndarray
    parity_localized: bool = True

    def __post_init__(self):
        if self.t < 0:
            raise ValueError(f"time index must be non-negative, got {self.t}")
        width = 2 * self.t + 1
        for name in ("plus_amps", "minus_amps"):
            arr = np.array(getattr(self, name), dtype=np.complex128, copy=True)
            if arr.shape != (width,):
                raise ValueError(
                    f"{name} must have shape ({width},) for t={self.t}, got {arr.shape}"
                )
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_min(self) -> int:
        return -self.t

    @property
    def n_max(self) -> int:
        return self.t

    @property
    def n_values(self) -> np.ndarray:
        """Site labels for the window, ``[-t, ..., t]``."""
        return np.arange(-self.t, self.t + 1)

    def amplitudes_at(self, n: int) -> tuple[complex, complex]:
        """Both components at site ``n`` (zero outside the window)."""
        if abs(n) > self.t:
            return 0j, 0j
        i = n + self.t
        return complex(self.plus_amps[i]), complex(self.minus_amps[i])

    def norm(self) -> float:
        """Total probability carried by the state."""
        return float(
            np.sum(np.abs(self.plus_amps) ** 2 + np.abs(self.minus_amps) ** 2)
        )

    def validate(self, atol: float = 1e-12) -> None:
        """Check the physical invariants; raise ``ValueError`` on failure.

        Verifies finiteness, normalization within ``atol``, and (when
        ``parity_localized``) exact zeros on sites with ``n + t`` odd.
        """
        if not (np.all(np.isfinite(self.plus_amps.view(np.float64)))
                and np.all(np.isfinite(self.minus_amps.view(np.float64)))):
            raise ValueError("amplitudes contain non-finite entries")
        drift = abs(self.norm() - 1.0)
        if drift > atol:
            raise ValueError(f"norm deviates from 1 by {drift:.3e} (atol={atol:.1e})")
        if self.parity_localized:
            odd = np.arange(1, 2 * self.t + 1, 2)
            if self.t > 0 and (np.any(self.plus_amps[odd] != 0)
                               or np.any(self.minus_amps[odd] != 0)):
                raise ValueError("off-parity sites carry nonzero amplitude")


def localized_state(init: InitialState) -> SpinorField:
    """Walker at ``t = 0``: everything on site 0 with the given spinor."""
    plus = np.array([np.cos(init.eta)], dtype=np.complex128)
    minus = np.array([np.exp(1j * init.gamma) * np.sin(init.eta)], dtype=np.complex128)
    return SpinorField(t=0, plus_amps=plus, minus_amps=minus, parity_localized=True)


def _fmt(x: float) -> str:
    # 17 significant digits: enough to round-trip any double exactly.
    return format(x, ".16e")


def save_spinor_csv(state: SpinorField, path) -> None:
    """Write the state as ``n,re_plus,im_plus,re_minus,im_minus`` rows."""
    with open(path, "w", newline="") as fh:
        fh.write(SPINOR_CSV_HEADER + "\n")
        for i, n in enumerate(range(-state.t, state.t + 1)):
            p = state.plus_amps[i]
            m = state.minus_amps[i]
            fh.write(
                f"{n},{_fmt(p.real)},{_fmt(p.imag)},{_fmt(m.real)},{_fmt(m.imag)}\n"
            )


def load_spinor_csv(path) -> SpinorField:
    """Read a state written by :func:`save_spinor_csv`.

    The rows must cover a full window ``-t .. t`` in order.  The parity flag
    is recovered from the data: it is set when every off-parity site is
    exactly zero.
    """
    with open(path, newline="") as fh:
        header = fh.readline().strip()
        if header != SPINOR_CSV_HEADER:
            raise ValueError(f"unexpected header {header!r}")
        ns, plus, minus = [], [], []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            if len(cells) != 5:
                raise ValueError(f"malformed row: {line!r}")
            ns.append(int(cells[0]))
            plus.append(complex(float(cells[1]), float(cells[2])))
            minus.append(complex(float(cells[3]), float(cells[4])))
    if not ns:
        raise ValueError("no data rows")
    t = (len(ns) - 1) // 2
    expected = list(range(-t, t + 1))
    if ns != expected:
        raise ValueError(f"rows must cover the contiguous window -{t}..{t}")
    plus_arr = np.array(plus, dtype=np.complex128)
    minus_arr = np.array(minus, dtype=np.complex128)
    odd = np.arange(1, 2 * t + 1, 2)
    parity = bool(
        t == 0 or (np.all(plus_arr[odd] == 0) and np.all(minus_arr[odd] == 0))
    )
    return SpinorField(t=t, plus_amps=plus_arr, minus_amps=minus_arr,
                       parity_localized=parity)
