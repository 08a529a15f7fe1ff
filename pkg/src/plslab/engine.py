"""One-round LOCAL verification: views, the scheme interface, verifier runs."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping

from .bits import CodecContext, DecodeError
from .graph import InstanceError, Label, LabeledGraph
from .languages import Language, decide_membership


class ProverRefused(ValueError):
    """The prover was asked to certify a nonmember."""


class _Undecodable:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "UNDECODABLE"


UNDECODABLE = _Undecodable()


@dataclass(frozen=True)
class Certificate:
    """Raw certificate bits, as a node receives them."""

    bits: str = ""

    @property
    def size(self) -> int:
        return len(self.bits)


@dataclass(frozen=True)
class Neighbor:
    id: int
    label: Label
    cert: Any
    weight: Fraction | None = None


@dataclass(frozen=True)
class LocalView:
    """Everything a node may consult in one round: its own triple and its neighbors'."""

    id: int
    label: Label
    cert: Any
    neighbors: tuple[Neighbor, ...]

    def neighbor(self, node_id: int) -> Neighbor | None:
        for nb in self.neighbors:
            if nb.id == node_id:
                return nb
        return None

    @property
    def neighbor_ids(self) -> frozenset:
        return frozenset(nb.id for nb in self.neighbors)


@dataclass(frozen=True)
class Verdict:
    accept: Mapping[int, bool]

    @property
    def k(self) -> int:
        return sum(1 for ok in self.accept.values() if not ok)

    @property
    def rejecting(self) -> tuple[int, ...]:
        return tuple(sorted(v for v, ok in self.accept.items() if not ok))

    @property
    def all_accept(self) -> bool:
        return self.k == 0


class Scheme:
    """A prover plus a one-round local verifier, with a bit codec for certificates."""

    name = "scheme"
    language: Language

    def prove(self, instance: LabeledGraph) -> dict[int, Any]:
        raise NotImplementedError

    def verify(self, view: LocalView) -> bool:
        raise NotImplementedError

    def encode(self, cert, ctx: CodecContext) -> str:
        raise NotImplementedError

    def decode(self, bits: str, ctx: CodecContext):
        raise NotImplementedError

    def size_bound(self, ctx: CodecContext, n: int) -> int:
        """Upper bound on certificate length in bits for an n-node instance."""
        raise NotImplementedError

    def domains(self, instance: LabeledGraph) -> dict[int, list]:
        """Bounded per-node certificate domains used by the search oracles."""
        raise NotImplementedError

    # pruning hooks for the search oracles: both are necessary conditions
    def self_ok(self, view: LocalView) -> bool:
        return True

    def pair_ok(self, view: LocalView, nb: Neighbor) -> bool:
        return True

    def require_member(self, instance: LabeledGraph) -> None:
        if not decide_membership(self.language, instance):
            raise ProverRefused(f"{self.name}: instance is not in {self.language.value}")

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class ConjunctiveScheme(Scheme):
    """Verifier that is the conjunction of a self check and one check per neighbor."""

    def verify(self, view: LocalView) -> bool:
        return self.self_ok(view) and all(self.pair_ok(view, nb) for nb in view.neighbors)


# --------------------------------------------------------------------------


def build_views(instance: LabeledGraph, certs: Mapping[int, Any]) -> dict[int, LocalView]:
    g = instance.graph
    missing = set(g.nodes) - set(certs)
    if missing:
        raise InstanceError(f"missing certificates for nodes {sorted(missing)}")
    views = {}
    for v in g.nodes:
        nbs = tuple(Neighbor(u, instance.labels[u], certs[u], g.weight(v, u)) for u in sorted(g.adj[v]))
        views[v] = LocalView(v, instance.labels[v], certs[v], nbs)
    return views


_VERIFIER_FAULTS = (TypeError, ValueError, AttributeError, KeyError, IndexError)


def verify_view(scheme: Scheme, view: LocalView) -> bool:
    if view.cert is UNDECODABLE or any(nb.cert is UNDECODABLE for nb in view.neighbors):
        return False
    try:
        return bool(scheme.verify(view))
    except _VERIFIER_FAULTS:
        return False


def decode_certificate(scheme: Scheme, cert: Certificate, ctx: CodecContext):
    try:
        return scheme.decode(cert.bits, ctx)
    except (DecodeError, ValueError, IndexError):
        return UNDECODABLE


def decode_map(scheme: Scheme, instance: LabeledGraph, certs: Mapping[int, Any]) -> dict[int, Any]:
    ctx = CodecContext.for_instance(instance)
    return {v: decode_certificate(scheme, c, ctx) if isinstance(c, Certificate) else c
            for v, c in certs.items()}


def encode_map(scheme: Scheme, instance: LabeledGraph, certs: Mapping[int, Any]) -> dict[int, Certificate]:
    ctx = CodecContext.for_instance(instance)
    return {v: Certificate(scheme.encode(c, ctx)) for v, c in certs.items()}


def run_verifier(scheme: Scheme, instance: LabeledGraph, certs: Mapping[int, Any]) -> Verdict:
    """Run the verifier at every node.

    ``certs`` may hold raw :class:`Certificate` bits (decoded here; failures
    make the owner and its neighbors reject) or already-structured values.
    """
    views = build_views(instance, decode_map(scheme, instance, certs))
    return Verdict({v: verify_view(scheme, view) for v, view in views.items()})


@dataclass(frozen=True)
class CompletenessFailure:
    instance: LabeledGraph
    verdict: Verdict


def check_completeness(scheme: Scheme, lang: Language, instances) -> list[CompletenessFailure]:
    """Members whose prover certificates (after a bit round trip) are rejected somewhere."""
    failures = []
    for inst in instances:
        if not decide_membership(lang, inst):
            raise InstanceError("completeness check given a nonmember")
        certs = encode_map(scheme, inst, scheme.prove(inst))
        verdict = run_verifier(scheme, inst, certs)
        if verdict.k:
            failures.append(CompletenessFailure(inst, verdict))
    return failures
