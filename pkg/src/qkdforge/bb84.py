"""Prepare-and-measure key distribution with per-qubit quantum transport.

Two protocol modes share the same transmission, sifting, and check-bit
machinery:

- standard: reconciliation is a pluggable hook (null by default) and
  privacy amplification is reported as a target key length with the
  exponential information bound.
- shor_preskill: a nested code pair does the work classically. Alice
  draws a random codeword u of C1, announces x - u over the classical
  channel, Bob shifts his block to u + e1 and decodes with C1's syndrome
  table, and both sides map to the key through the coset label of u.

Every random decision flows through one seeded generator in a documented
order (raw bits, basis bits, per-qubit transport draws, codeword draw in
shor_preskill mode, subset selections), so a (config, seed) pair pins the
whole transcript.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .codes import (
    CosetQuotient,
    LinearCode,
    SyndromeTable,
    build_syndrome_table,
    decode,
    key_from_coset,
    quotient,
)
from .gf2 import BitVector
from .qsim import StateVector, apply_gate, basis_state, measure_all_z

BASIS_Z = 0
BASIS_X = 1


@dataclass(frozen=True)
class ChannelModel:
    """Independent per-qubit X error with probability px and Z error with
    probability pz."""

    px: float = 0.0
    pz: float = 0.0

    def __post_init__(self) -> None:
        for name, p in (("px", self.px), ("pz", self.pz)):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be a probability, got {p}")


@dataclass(frozen=True)
class EveStrategy:
    kind: str = "none"  # "none" | "intercept_resend"
    basis_policy: str = "uniform_random"  # "uniform_random" | "always_Z" | "always_X"

    def __post_init__(self) -> None:
        if self.kind not in ("none", "intercept_resend"):
            raise ValueError(f"unknown eavesdropper kind {self.kind!r}")
        if self.basis_policy not in ("uniform_random", "always_Z", "always_X"):
            raise ValueError(f"unknown basis policy {self.basis_policy!r}")


# Stand-in for the interactive reconciliation exchange: receives both
# blocks, returns Bob's corrected block.
Reconciler = Callable[[BitVector, BitVector], BitVector]


@dataclass
class SessionConfig:
    n: int
    delta: float = 0.25
    t_abort: Optional[int] = None  # default: tolerate up to n check errors
    seed: int = 0
    mode: str = "standard"  # "standard" | "shor_preskill"
    channel: ChannelModel = field(default_factory=ChannelModel)
    eve: EveStrategy = field(default_factory=EveStrategy)
    codes: Optional[tuple[LinearCode, LinearCode]] = None
    reconciler: Optional[Reconciler] = None
    shed_bits: int = 0  # extra bits sacrificed in the amplification report

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")
        if self.mode not in ("standard", "shor_preskill"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.t_abort is None:
            self.t_abort = self.n
        if not 0 <= self.t_abort <= self.n:
            raise ValueError("t_abort must be between 0 and n")
        if self.mode == "shor_preskill":
            if self.codes is None:
                raise ValueError("shor_preskill mode needs a (C1, C2) code pair")
            if self.codes[0].n != self.n:
                raise ValueError(
                    f"block size n={self.n} must equal the code length {self.codes[0].n}"
                )

    @property
    def raw_length(self) -> int:
        return math.ceil((4 + self.delta) * self.n)


@dataclass
class SessionTranscript:
    """Complete record of one protocol run."""

    mode: str
    seed: int
    n: int
    d: BitVector
    b: BitVector
    bob_bases: BitVector
    bob_bits: BitVector
    eve_learned: tuple[bool, ...]
    sifted: tuple[int, ...]
    selected: Optional[tuple[int, ...]] = None
    check_idx: Optional[tuple[int, ...]] = None
    key_idx: Optional[tuple[int, ...]] = None
    mismatches: Optional[int] = None
    aborted: bool = False
    abort_reason: Optional[str] = None
    alice_block: Optional[BitVector] = None
    bob_block: Optional[BitVector] = None
    reconciled_block: Optional[BitVector] = None
    u: Optional[BitVector] = None
    x_minus_u: Optional[BitVector] = None
    u_hat: Optional[BitVector] = None
    alice_key: Optional[BitVector] = None
    bob_key: Optional[BitVector] = None
    keys_match: Optional[bool] = None
    pa_report: Optional[dict] = None

    def to_json(self) -> str:
        def bits(v: Optional[BitVector]) -> Optional[str]:
            return None if v is None else str(v)

        payload = {
            "d": bits(self.d),
            "b": bits(self.b),
            "bobBases": bits(self.bob_bases),
            "sifted": list(self.sifted),
            "checkIdx": list(self.check_idx) if self.check_idx is not None else None,
            "mismatches": self.mismatches,
            "aborted": self.aborted,
            "xMinusU": bits(self.x_minus_u),
            "uHat": bits(self.u_hat),
            "key": bits(self.alice_key),
            "mode": self.mode,
            "seed": self.seed,
            "n": self.n,
            "bobBits": bits(self.bob_bits),
            "keyIdx": list(self.key_idx) if self.key_idx is not None else None,
            "bobKey": bits(self.bob_key),
            "keysMatch": self.keys_match,
            "abortReason": self.abort_reason,
            "paReport": self.pa_report,
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _prepare(bit: int, basis: int) -> StateVector:
    state = basis_state(BitVector((bit,)))
    if basis == BASIS_X:
        state = apply_gate(state, "H", 1)
    return state


def _measure_in(
    state: StateVector, basis: int, rng: np.random.Generator
) -> tuple[int, StateVector]:
    """Measure one qubit in the chosen basis; the returned state is the
    post-measurement eigenstate of that basis."""
    if basis == BASIS_X:
        state = apply_gate(state, "H", 1)
    bits, state = measure_all_z(state, rng)
    if basis == BASIS_X:
        state = apply_gate(state, "H", 1)
    return bits[0], state


def transmit_qubit(
    bit: int,
    basis: int,
    channel: ChannelModel,
    eve: EveStrategy,
    rng: np.random.Generator,
) -> tuple[int, int, bool]:
    """Send one encoded qubit through the eavesdropper and the channel to
    Bob's randomly chosen measurement.

    Draw order: Eve's basis (uniform policy only), Eve's measurement,
    channel X, channel Z, Bob's basis, Bob's measurement. Returns
    (bob_basis, bob_bit, eve_learned) where eve_learned is True exactly
    when Eve measured in the preparation basis.
    """
    state = _prepare(bit, basis)
    eve_learned = False
    if eve.kind == "intercept_resend":
        if eve.basis_policy == "uniform_random":
            eve_basis = BASIS_Z if rng.random() < 0.5 else BASIS_X
        elif eve.basis_policy == "always_Z":
            eve_basis = BASIS_Z
        else:
            eve_basis = BASIS_X
        # She resends the eigenstate she measured; no cloning shortcut.
        _, state = _measure_in(state, eve_basis, rng)
        eve_learned = eve_basis == basis
    if rng.random() < channel.px:
        state = apply_gate(state, "X", 1)
    if rng.random() < channel.pz:
        state = apply_gate(state, "Z", 1)
    bob_basis = BASIS_Z if rng.random() < 0.5 else BASIS_X
    bob_bit, _ = _measure_in(state, bob_basis, rng)
    return bob_basis, bob_bit, eve_learned


def bennett_bound(s: int) -> float:
    """Upper bound 2^(-s)/ln 2 on the eavesdropper's information after
    shedding s extra bits; halves with each additional bit."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    return 2.0**-s / math.log(2.0)


def eve_info_estimate(transcript: SessionTranscript) -> float:
    """Fraction of sifted positions where the eavesdropper measured in
    the preparation basis (and so learned the bit)."""
    if not transcript.sifted:
        return 0.0
    learned = sum(1 for i in transcript.sifted if transcript.eve_learned[i])
    return learned / len(transcript.sifted)


@dataclass(frozen=True)
class KeyDerivation:
    """The classical tail of the shor_preskill mode, from Bob's measured
    block and Alice's announcement to the two keys."""

    x_minus_u: BitVector
    u_hat: Optional[BitVector]
    decode_status: str
    alice_key: BitVector
    bob_key: Optional[BitVector]


def shor_preskill_keys(
    c1: LinearCode,
    quot: CosetQuotient,
    table: SyndromeTable,
    x: BitVector,
    u: BitVector,
    bob_block: BitVector,
) -> KeyDerivation:
    """Steps from the announcement onward: Alice announces x - u, Bob
    forms (x + e1) + (x - u) = u + e1 and decodes it with C1; both sides
    key off the coset of their codeword."""
    x_minus_u = x + u
    shifted = bob_block + x_minus_u
    result = decode(c1, table, shifted)
    alice_key = key_from_coset(quot, u)
    if result.status != "ok":
        return KeyDerivation(x_minus_u, None, result.status, alice_key, None)
    return KeyDerivation(
        x_minus_u, result.word, result.status, alice_key, key_from_coset(quot, result.word)
    )


def _transmission_phase(
    config: SessionConfig, rng: np.random.Generator
) -> tuple[BitVector, BitVector, BitVector, BitVector, tuple[bool, ...]]:
    raw_len = config.raw_length
    d = BitVector.from_ints(rng.integers(0, 2, size=raw_len))
    b = BitVector.from_ints(rng.integers(0, 2, size=raw_len))
    bob_bases, bob_bits, eve_flags = [], [], []
    for i in range(raw_len):
        basis, bit, learned = transmit_qubit(d[i], b[i], config.channel, config.eve, rng)
        bob_bases.append(basis)
        bob_bits.append(bit)
        eve_flags.append(learned)
    return d, b, BitVector(tuple(bob_bases)), BitVector(tuple(bob_bits)), tuple(eve_flags)


def _select_blocks(
    config: SessionConfig,
    rng: np.random.Generator,
    sifted: tuple[int, ...],
) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Pick 2n of the sifted positions, then n of those as check bits;
    the remaining n (in sifted order) form the key block."""
    n = config.n
    picks = rng.choice(len(sifted), size=2 * n, replace=False)
    selected = tuple(sorted(sifted[p] for p in picks))
    check_picks = rng.choice(2 * n, size=n, replace=False)
    check_idx = tuple(sorted(selected[p] for p in check_picks))
    check_set = set(check_idx)
    key_idx = tuple(i for i in selected if i not in check_set)
    return selected, check_idx, key_idx


def run_standard(config: SessionConfig) -> SessionTranscript:
    """Raw generation, transmission, sifting, check-bit estimation, and
    the reporting-only reconciliation/amplification tail."""
    if config.mode != "standard":
        raise ValueError("config.mode must be 'standard'")
    rng = np.random.default_rng(config.seed)
    n = config.n
    d, b, bob_bases, bob_bits, eve_flags = _transmission_phase(config, rng)
    sifted = tuple(i for i in range(config.raw_length) if b[i] == bob_bases[i])
    transcript = SessionTranscript(
        mode=config.mode,
        seed=config.seed,
        n=n,
        d=d,
        b=b,
        bob_bases=bob_bases,
        bob_bits=bob_bits,
        eve_learned=eve_flags,
        sifted=sifted,
    )
    if len(sifted) < 2 * n:
        transcript.aborted = True
        transcript.abort_reason = "insufficient_sifted_bits"
        return transcript

    selected, check_idx, key_idx = _select_blocks(config, rng, sifted)
    transcript.selected = selected
    transcript.check_idx = check_idx
    transcript.key_idx = key_idx
    transcript.mismatches = sum(1 for i in check_idx if d[i] != bob_bits[i])
    if transcript.mismatches > config.t_abort:
        transcript.aborted = True
        transcript.abort_reason = "check_bit_errors"
        return transcript

    transcript.alice_block = BitVector(tuple(d[i] for i in key_idx))
    transcript.bob_block = BitVector(tuple(bob_bits[i] for i in key_idx))
    if config.reconciler is not None:
        transcript.reconciled_block = config.reconciler(
            transcript.alice_block, transcript.bob_block
        )
    block_mismatches = sum(
        1 for a, bb in zip(transcript.alice_block, transcript.bob_block) if a != bb
    )
    learned = sum(1 for i in key_idx if eve_flags[i])
    transcript.pa_report = {
        "blockMismatches": block_mismatches,
        "r": learned,
        "s": config.shed_bits,
        "targetK": n - learned - config.shed_bits,
        "eveBound": bennett_bound(config.shed_bits),
    }
    return transcript


def run_shor_preskill(config: SessionConfig) -> SessionTranscript:
    """The code-based mode: standard steps through check-bit estimation,
    then codeword announcement, classical decoding, and coset keys."""
    if config.mode != "shor_preskill":
        raise ValueError("config.mode must be 'shor_preskill'")
    c1, c2 = config.codes
    quot = quotient(c1, c2)
    table = build_syndrome_table(c1, c1.corrects)

    rng = np.random.default_rng(config.seed)
    n = config.n
    d, b, bob_bases, bob_bits, eve_flags = _transmission_phase(config, rng)
    # Alice's codeword draw happens before any announcement.
    u = c1.encode(BitVector.from_ints(rng.integers(0, 2, size=c1.k)))

    sifted = tuple(i for i in range(config.raw_length) if b[i] == bob_bases[i])
    transcript = SessionTranscript(
        mode=config.mode,
        seed=config.seed,
        n=n,
        d=d,
        b=b,
        bob_bases=bob_bases,
        bob_bits=bob_bits,
        eve_learned=eve_flags,
        sifted=sifted,
        u=u,
    )
    if len(sifted) < 2 * n:
        transcript.aborted = True
        transcript.abort_reason = "insufficient_sifted_bits"
        return transcript

    selected, check_idx, key_idx = _select_blocks(config, rng, sifted)
    transcript.selected = selected
    transcript.check_idx = check_idx
    transcript.key_idx = key_idx
    transcript.mismatches = sum(1 for i in check_idx if d[i] != bob_bits[i])
    if transcript.mismatches > config.t_abort:
        transcript.aborted = True
        transcript.abort_reason = "check_bit_errors"
        return transcript

    x = BitVector(tuple(d[i] for i in key_idx))
    bob_block = BitVector(tuple(bob_bits[i] for i in key_idx))
    transcript.alice_block = x
    transcript.bob_block = bob_block

    derivation = shor_preskill_keys(c1, quot, table, x, u, bob_block)
    transcript.x_minus_u = derivation.x_minus_u
    if derivation.decode_status != "ok":
        transcript.aborted = True
        transcript.abort_reason = "decode_failure"
        return transcript
    transcript.u_hat = derivation.u_hat
    transcript.alice_key = derivation.alice_key
    transcript.bob_key = derivation.bob_key
    transcript.keys_match = derivation.alice_key == derivation.bob_key
    return transcript


def run_session(config: SessionConfig) -> SessionTranscript:
    if config.mode == "standard":
        return run_standard(config)
    return run_shor_preskill(config)


def replay_bob(
    transcript: SessionTranscript,
    c1: Optional[LinearCode] = None,
    c2: Optional[LinearCode] = None,
) -> dict:
    """Recompute Bob's side of a finished session from his measurements
    plus Alice's announcements only; used to check that the transcript
    carries no hidden coupling."""
    sifted = tuple(
        i for i in range(len(transcript.b)) if transcript.b[i] == transcript.bob_bases[i]
    )
    out: dict = {"sifted": sifted}
    if transcript.check_idx is None:
        return out
    alice_check_values = [transcript.d[i] for i in transcript.check_idx]  # announced
    mismatches = sum(
        1
        for value, i in zip(alice_check_values, transcript.check_idx)
        if value != transcript.bob_bits[i]
    )
    out["mismatches"] = mismatches
    check_set = set(transcript.check_idx)
    key_idx = tuple(i for i in transcript.selected if i not in check_set)
    out["key_idx"] = key_idx
    bob_block = BitVector(tuple(transcript.bob_bits[i] for i in key_idx))
    out["bob_block"] = bob_block
    if transcript.mode == "shor_preskill" and transcript.x_minus_u is not None:
        quot = quotient(c1, c2)
        table = build_syndrome_table(c1, c1.corrects)
        shifted = bob_block + transcript.x_minus_u
        result = decode(c1, table, shifted)
        out["u_hat"] = result.word
        out["bob_key"] = key_from_coset(quot, result.word)
    return out
