"""Declarative circuit documents: validation, (de)serialization, execution.

A circuit document is JSON with a required ``"schema": "gicirc/1"`` key, a
mode count, one preparation per mode, an ordered element list, and exactly
one detection block.  Parsing is strict: unknown keys are rejected so typos
in physics parameters fail loudly, and semantic errors name the offending
element index and constraint.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import CircuitError
from .states import (
    Coherent,
    ElementMap,
    GaussianState,
    QuadratureStats,
    Thermal,
    Vacuum,
    apply,
    make_state,
    quadrature_stats,
)
from .elements import (
    BS_CONVENTIONS,
    LossSpec,
    PaGain,
    beamsplitter,
    loss_channel,
    parametric_amplifier,
    phase_shift,
    single_mode_squeezer,
)
from .noise_model import NoisyPaParams, noisy_pa

__all__ = [
    "SCHEMA",
    "DEFAULT_THETA",
    "PaElement",
    "SqueezerElement",
    "BsElement",
    "PhaseElement",
    "LossElement",
    "NoisyPaElement",
    "Detection",
    "CircuitSpec",
    "element_map",
    "simulate",
    "propagate_mean",
    "detect_stats",
    "parse_circuit",
    "serialize_circuit",
]

SCHEMA = "gicirc/1"
DEFAULT_THETA = math.pi / 2
DEFAULT_BS_T = 0.5


def _pair(modes) -> tuple[int, int]:
    a, b = modes
    a, b = int(a), int(b)
    if a == b:
        raise ValueError(f"pair modes must be distinct, got ({a}, {b})")
    return a, b


@dataclass(frozen=True)
class PaElement:
    """Ideal two-mode parametric amplifier."""

    modes: tuple[int, int]
    g: float

    def __post_init__(self):
        object.__setattr__(self, "modes", _pair(self.modes))
        object.__setattr__(self, "g", PaGain(self.g).g)


@dataclass(frozen=True)
class SqueezerElement:
    """Single-mode (degenerate) squeezer."""

    mode: int
    g: float

    def __post_init__(self):
        object.__setattr__(self, "mode", int(self.mode))
        object.__setattr__(self, "g", PaGain(self.g).g)


@dataclass(frozen=True)
class BsElement:
    """Beamsplitter with intensity transmission ``T``."""

    modes: tuple[int, int]
    T: float = DEFAULT_BS_T
    convention: str = "second_minus"

    def __post_init__(self):
        object.__setattr__(self, "modes", _pair(self.modes))
        T = float(self.T)
        if not 0.0 <= T <= 1.0:
            raise ValueError(f"beamsplitter transmission T must lie in [0, 1], got {T}")
        object.__setattr__(self, "T", T)
        if self.convention not in BS_CONVENTIONS:
            raise ValueError(
                f"unknown beamsplitter convention {self.convention!r}; "
                f"expected one of {BS_CONVENTIONS}"
            )


@dataclass(frozen=True)
class PhaseElement:
    """Optical phase shift on one mode."""

    mode: int
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "mode", int(self.mode))
        phi = float(self.phi)
        if not math.isfinite(phi):
            raise ValueError(f"phase phi must be finite, got {phi}")
        object.__setattr__(self, "phi", phi)


@dataclass(frozen=True)
class LossElement:
    """Fractional intensity loss on one mode."""

    mode: int
    L: float

    def __post_init__(self):
        object.__setattr__(self, "mode", int(self.mode))
        object.__setattr__(self, "L", LossSpec(self.L).L)


@dataclass(frozen=True)
class NoisyPaElement:
    """Lossy parametric amplifier with thermal auxiliaries."""

    modes: tuple[int, int]
    rho: float
    kappa: float
    epsilon2: float

    def __post_init__(self):
        object.__setattr__(self, "modes", _pair(self.modes))
        params = NoisyPaParams(self.rho, self.kappa, self.epsilon2)
        object.__setattr__(self, "rho", params.rho)
        object.__setattr__(self, "kappa", params.kappa)
        object.__setattr__(self, "epsilon2", params.epsilon2)


Element = PaElement | SqueezerElement | BsElement | PhaseElement | LossElement | NoisyPaElement


@dataclass(frozen=True)
class Detection:
    """Homodyne detection target: mode index and local-oscillator angle."""

    mode: int
    theta: float = DEFAULT_THETA

    def __post_init__(self):
        object.__setattr__(self, "mode", int(self.mode))
        object.__setattr__(self, "theta", float(self.theta))


def _element_modes(element: Element) -> tuple[int, ...]:
    if isinstance(element, (PaElement, BsElement, NoisyPaElement)):
        return element.modes
    return (element.mode,)


@dataclass(frozen=True)
class CircuitSpec:
    """Validated circuit: preparations, ordered elements, one detection."""

    n_modes: int
    inputs: tuple
    elements: tuple
    detect: Detection

    def __post_init__(self):
        n_modes = int(self.n_modes)
        if n_modes < 1:
            raise CircuitError(f"n_modes must be a positive integer, got {self.n_modes}")
        object.__setattr__(self, "n_modes", n_modes)
        inputs = tuple(self.inputs)
        if len(inputs) != n_modes:
            raise CircuitError(
                f"expected {n_modes} input preparations, got {len(inputs)}"
            )
        for k, prep in enumerate(inputs):
            if not isinstance(prep, (Vacuum, Coherent, Thermal)):
                raise CircuitError(f"input {k}: unknown preparation {prep!r}")
        object.__setattr__(self, "inputs", inputs)
        elements = tuple(self.elements)
        for i, el in enumerate(elements):
            if not isinstance(el, Element):
                raise CircuitError(f"element {i}: not a circuit element: {el!r}")
            for m in _element_modes(el):
                if not 0 <= m < n_modes:
                    raise CircuitError(
                        f"element {i}: mode {m} out of range for {n_modes} modes"
                    )
        object.__setattr__(self, "elements", elements)
        if not isinstance(self.detect, Detection):
            raise CircuitError(f"detect block must be a Detection, got {self.detect!r}")
        if not 0 <= self.detect.mode < n_modes:
            raise CircuitError(
                f"detect: mode {self.detect.mode} out of range for {n_modes} modes"
            )


def element_map(element: Element, n_modes: int) -> ElementMap:
    """Concrete channel map of one element on an ``n_modes`` register."""
    if isinstance(element, PaElement):
        return parametric_amplifier(element.modes, PaGain(element.g), n_modes)
    if isinstance(element, SqueezerElement):
        return single_mode_squeezer(element.mode, PaGain(element.g), n_modes)
    if isinstance(element, BsElement):
        return beamsplitter(element.modes, element.T, n_modes, element.convention)
    if isinstance(element, PhaseElement):
        return phase_shift(element.mode, element.phi, n_modes)
    if isinstance(element, LossElement):
        return loss_channel(element.mode, LossSpec(element.L), n_modes)
    if isinstance(element, NoisyPaElement):
        params = NoisyPaParams(element.rho, element.kappa, element.epsilon2)
        return noisy_pa(element.modes, params, n_modes)
    raise TypeError(f"unknown element {element!r}")


def simulate(spec: CircuitSpec) -> GaussianState:
    """Run the circuit and return the output state."""
    state = make_state(spec.n_modes, spec.inputs)
    for el in spec.elements:
        state = apply(state, element_map(el, spec.n_modes))
    return state


def propagate_mean(spec: CircuitSpec) -> np.ndarray:
    """Mean quadrature vector of the output state (covariance skipped)."""
    mean = np.zeros(2 * spec.n_modes)
    for k, prep in enumerate(spec.inputs):
        if isinstance(prep, Coherent):
            mean[2 * k] = 2.0 * prep.alpha.real
            mean[2 * k + 1] = 2.0 * prep.alpha.imag
    for el in spec.elements:
        emap = element_map(el, spec.n_modes)
        mean = emap.linear @ mean + emap.displacement
    return mean


def detect_stats(spec: CircuitSpec, state: GaussianState | None = None) -> QuadratureStats:
    """Homodyne statistics at the circuit's detection block."""
    if state is None:
        state = simulate(spec)
    return quadrature_stats(state, spec.detect.mode, spec.detect.theta)


# --- document form -----------------------------------------------------

_INPUT_KEYS = {
    "vacuum": set(),
    "coherent": {"alpha"},
    "thermal": {"variance"},
}

_ELEMENT_KEYS = {
    "pa": ({"modes", "g"}, set()),
    "single_mode_squeezer": ({"mode", "g"}, set()),
    "bs": ({"modes"}, {"T", "convention"}),
    "phase": ({"mode", "phi"}, set()),
    "loss": ({"mode", "L"}, set()),
    "noisy_pa": ({"modes", "rho", "kappa", "epsilon2"}, set()),
}


def _require_keys(obj: dict, required: set, optional: set, where: str):
    missing = required - obj.keys()
    if missing:
        raise CircuitError(f"{where}: missing key(s) {sorted(missing)}")
    unknown = obj.keys() - required - optional
    if unknown:
        raise CircuitError(f"{where}: unknown key(s) {sorted(unknown)}")


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise CircuitError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _mode_list(value, where: str) -> tuple[int, ...]:
    if not isinstance(value, list) or not all(
        isinstance(m, int) and not isinstance(m, bool) for m in value
    ):
        raise CircuitError(f"{where}: expected a list of mode indices, got {value!r}")
    return tuple(value)


def _parse_input(obj, k: int):
    where = f"input {k}"
    if not isinstance(obj, dict):
        raise CircuitError(f"{where}: expected an object, got {obj!r}")
    kind = obj.get("type")
    if kind not in _INPUT_KEYS:
        raise CircuitError(
            f"{where}: unknown input type {kind!r}; expected one of {sorted(_INPUT_KEYS)}"
        )
    _require_keys(obj, _INPUT_KEYS[kind] | {"type"}, set(), where)
    try:
        if kind == "vacuum":
            return Vacuum()
        if kind == "coherent":
            alpha = obj["alpha"]
            if isinstance(alpha, list):
                if len(alpha) != 2:
                    raise CircuitError(
                        f"{where}: complex alpha must be a [re, im] pair, got {alpha!r}"
                    )
                return Coherent(complex(_number(alpha[0], where), _number(alpha[1], where)))
            return Coherent(complex(_number(alpha, where), 0.0))
        return Thermal(_number(obj["variance"], where))
    except CircuitError:
        raise
    except ValueError as exc:
        raise CircuitError(f"{where}: {exc}") from exc


def _parse_element(obj, i: int) -> Element:
    where = f"element {i}"
    if not isinstance(obj, dict):
        raise CircuitError(f"{where}: expected an object, got {obj!r}")
    kind = obj.get("type")
    if kind not in _ELEMENT_KEYS:
        raise CircuitError(
            f"{where}: unknown element type {kind!r}; expected one of {sorted(_ELEMENT_KEYS)}"
        )
    required, optional = _ELEMENT_KEYS[kind]
    _require_keys(obj, required | {"type"}, optional, where)
    try:
        if kind == "pa":
            return PaElement(_mode_list(obj["modes"], where), _number(obj["g"], where))
        if kind == "single_mode_squeezer":
            return SqueezerElement(int(obj["mode"]), _number(obj["g"], where))
        if kind == "bs":
            return BsElement(
                _mode_list(obj["modes"], where),
                _number(obj.get("T", DEFAULT_BS_T), where),
                obj.get("convention", "second_minus"),
            )
        if kind == "phase":
            return PhaseElement(int(obj["mode"]), _number(obj["phi"], where))
        if kind == "loss":
            return LossElement(int(obj["mode"]), _number(obj["L"], where))
        return NoisyPaElement(
            _mode_list(obj["modes"], where),
            _number(obj["rho"], where),
            _number(obj["kappa"], where),
            _number(obj["epsilon2"], where),
        )
    except CircuitError:
        raise
    except ValueError as exc:
        raise CircuitError(f"{where}: {exc}") from exc


def parse_circuit(text: str) -> CircuitSpec:
    """Parse and validate a circuit document.

    Raises :class:`CircuitError` with line/column information for malformed
    JSON and with the offending element index for semantic violations.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CircuitError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise CircuitError(f"circuit document must be a JSON object, got {type(doc).__name__}")
    _require_keys(doc, {"schema", "n_modes", "inputs", "elements", "detect"}, set(), "document")
    if doc["schema"] != SCHEMA:
        raise CircuitError(f"unsupported schema {doc['schema']!r}; expected {SCHEMA!r}")
    n_modes = doc["n_modes"]
    if isinstance(n_modes, bool) or not isinstance(n_modes, int) or n_modes < 1:
        raise CircuitError(f"n_modes must be a positive integer, got {n_modes!r}")
    if not isinstance(doc["inputs"], list):
        raise CircuitError("inputs must be a list of preparations")
    inputs = tuple(_parse_input(obj, k) for k, obj in enumerate(doc["inputs"]))
    if not isinstance(doc["elements"], list):
        raise CircuitError("elements must be a list")
    elements = tuple(_parse_element(obj, i) for i, obj in enumerate(doc["elements"]))
    det = doc["detect"]
    if not isinstance(det, dict):
        raise CircuitError(f"detect: expected an object, got {det!r}")
    _require_keys(det, {"mode"}, {"theta"}, "detect")
    if isinstance(det["mode"], bool) or not isinstance(det["mode"], int):
        raise CircuitError(f"detect: mode must be an integer, got {det['mode']!r}")
    detect = Detection(det["mode"], _number(det.get("theta", DEFAULT_THETA), "detect"))
    return CircuitSpec(n_modes, inputs, elements, detect)


def _input_doc(prep) -> dict:
    if isinstance(prep, Vacuum):
        return {"type": "vacuum"}
    if isinstance(prep, Coherent):
        if prep.alpha.imag == 0.0:
            return {"type": "coherent", "alpha": prep.alpha.real}
        return {"type": "coherent", "alpha": [prep.alpha.real, prep.alpha.imag]}
    return {"type": "thermal", "variance": prep.variance}


def _element_doc(element: Element) -> dict:
    if isinstance(element, PaElement):
        return {"type": "pa", "modes": list(element.modes), "g": element.g}
    if isinstance(element, SqueezerElement):
        return {"type": "single_mode_squeezer", "mode": element.mode, "g": element.g}
    if isinstance(element, BsElement):
        return {
            "type": "bs",
            "modes": list(element.modes),
            "T": element.T,
            "convention": element.convention,
        }
    if isinstance(element, PhaseElement):
        return {"type": "phase", "mode": element.mode, "phi": element.phi}
    if isinstance(element, LossElement):
        return {"type": "loss", "mode": element.mode, "L": element.L}
    return {
        "type": "noisy_pa",
        "modes": list(element.modes),
        "rho": element.rho,
        "kappa": element.kappa,
        "epsilon2": element.epsilon2,
    }


def serialize_circuit(spec: CircuitSpec, indent: int | None = 2) -> str:
    """Serialize a circuit to its document form (defaults echoed explicitly)."""
    doc = {
        "schema": SCHEMA,
        "n_modes": spec.n_modes,
        "inputs": [_input_doc(p) for p in spec.inputs],
        "elements": [_element_doc(e) for e in spec.elements],
        "detect": {"mode": spec.detect.mode, "theta": spec.detect.theta},
    }
    return json.dumps(doc, indent=indent)
