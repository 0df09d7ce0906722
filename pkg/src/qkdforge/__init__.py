"""qkdforge: classical linear codes, a small state-vector simulator, CSS
quantum codes, entanglement distillation, and BB84 key distribution."""

from .gf2 import BitMatrix, BitVector
from .codes import LinearCode, code_from_generator, code_from_parts, named_code
from .qsim import PauliString, StateVector, basis_state
from .css import CssCode, CssParams, css_build, css_codeword
from .bb84 import ChannelModel, EveStrategy, SessionConfig, run_session

__all__ = [
    "BitMatrix",
    "BitVector",
    "LinearCode",
    "code_from_generator",
    "code_from_parts",
    "named_code",
    "PauliString",
    "StateVector",
    "basis_state",
    "CssCode",
    "CssParams",
    "css_build",
    "css_codeword",
    "ChannelModel",
    "EveStrategy",
    "SessionConfig",
    "run_session",
]

__version__ = "0.1.0"
