import logging
from collections.abc import Iterable
from typing import Any

from opentelemetry import trace
from opentelemetry.trace.status import Status, StatusCode

from stable_pieces.config import GuardConfig
from stable_pieces.errors import InadmissibleChoice, InvariantBreach, NoStabilization, StablePiecesError
from stable_pieces.pieces.types import (
    PieceDescriptor,
    PieceState,
    PieceStep,
    SumCheck,
    TwistedPair,
    element_json,
    subset_json,
    subset_text,
)
from stable_pieces.weyl import CountPolynomial, NodeSubset, WeylDatum, WeylElement

SAMPLE_QS = (2, 3, 4)


class PieceEnumerator:
    """Enumerates the pieces of Z_{J,y,delta} for one Weyl datum.

    Starting from (J_0, Jp_0, y_0) = (J, Jp, y) a piece is built by choosing
    u_n in ^{Jp_n}W^{J_n} (inside W_{J_{n-1}} once n >= 1) and updating

        J_{n+1}  = J_n cap delta^-1 Ad(y_n^-1 u_n) J_n
        Jp_{n+1} = J_n cap Ad(u_n^-1 y_n) delta(J_n)
        y_{n+1}  = u_n^-1 y_n

    until u_n = 1 and the update is a fixed point.
    """

    def __init__(self, datum: WeylDatum, guards: GuardConfig | None = None) -> None:
        self.datum = datum
        self.guards = guards or GuardConfig()
        self.tracer = trace.get_tracer("stable_pieces.pieces")
        self._reps: dict[tuple[NodeSubset, NodeSubset], tuple[WeylElement, ...]] = {}
        self._parabolics: dict[NodeSubset, frozenset[WeylElement]] = {}

    def _double_reps(self, left: NodeSubset, right: NodeSubset) -> tuple[WeylElement, ...]:
        key = (left, right)
        if key not in self._reps:
            self._reps[key] = self.datum.double_reps(left, right)
        return self._reps[key]

    def _parabolic(self, nodes: NodeSubset) -> frozenset[WeylElement]:
        if nodes not in self._parabolics:
            self._parabolics[nodes] = frozenset(self.datum.parabolic(nodes))
        return self._parabolics[nodes]

    def initial_state(self, tp: TwistedPair) -> PieceState:
        return PieceState(n=0, J=tp.J, Jp=tp.Jp, y=tp.y, prevJ=self.datum.nodes)

    def admissible_choices(self, state: PieceState) -> tuple[WeylElement, ...]:
        reps = self._double_reps(state.Jp, state.J)
        if state.n == 0:
            return reps
        allowed = self._parabolic(state.prevJ)
        return tuple(u for u in reps if u in allowed)

    def step(self, state: PieceState, u: WeylElement) -> PieceState:
        if u not in self.admissible_choices(state):
            raise InadmissibleChoice(
                f"u={u!r} is not admissible at step {state.n} "
                f"(J={subset_text(state.J)}, Jp={subset_text(state.Jp)}, prevJ={subset_text(state.prevJ)})."
            )
        return self._advance(state, u)

    def _advance(self, state: PieceState, u: WeylElement) -> PieceState:
        datum = self.datum
        delta_J = datum.delta_subset(state.J)
        conjugated, _ = datum.ad_subset(state.y.inverse() * u, state.J)
        J_next = state.J & datum.delta_inverse_subset(conjugated)
        u_inv = u.inverse()
        twisted, _ = datum.ad_subset(u_inv * state.y, delta_J)
        Jp_next = state.J & twisted
        y_next = u_inv * state.y

        delta_next = datum.delta_subset(J_next)
        image, all_simple = datum.ad_subset(y_next, delta_next)
        if not all_simple or image != Jp_next:
            raise InvariantBreach(
                f"Ad({y_next!r}) delta({subset_text(J_next)}) = {subset_text(image)} "
                f"(all simple: {all_simple}) differs from Jp={subset_text(Jp_next)} after step {state.n}."
            )
        if not datum.is_minimal(Jp_next, y_next, delta_next):
            raise InvariantBreach(
                f"y={y_next!r} is not minimal in ^{subset_text(Jp_next)}W^{subset_text(delta_next)}."
            )
        return PieceState(n=state.n + 1, J=J_next, Jp=Jp_next, y=y_next, prevJ=state.J)

    def enumerate(self, tp: TwistedPair) -> list[PieceDescriptor]:
        with self.tracer.start_as_current_span("pieces.enumerate") as span:
            span.set_attribute("pair.J", subset_text(tp.J))
            span.set_attribute("pair.y", repr(tp.y))
            guard = self.guards.depth_guard(self.datum.rank)
            descriptors: list[PieceDescriptor] = []
            try:
                self._explore(tp, self.initial_state(tp), (), guard, descriptors)
            except StablePiecesError as e:
                span.set_status(Status(StatusCode.ERROR, str(e)))
                span.record_exception(e)
                raise
            descriptors.sort(key=PieceDescriptor.sort_key)
            span.set_attribute("pieces.count", len(descriptors))
            return descriptors

    def _explore(
        self,
        tp: TwistedPair,
        state: PieceState,
        steps: tuple[PieceStep, ...],
        guard: int,
        out: list[PieceDescriptor],
    ) -> None:
        for u in self.admissible_choices(state):
            successor = self._advance(state, u)
            path = steps + (PieceStep(J=state.J, Jp=state.Jp, u=u),)
            if u.is_identity() and successor.same_data(state):
                out.append(self._describe(tp, path, state))
                continue
            if successor.n > guard:
                raise NoStabilization(
                    f"Branch {[repr(s.u) for s in path]} of {tp!r} did not stabilize within {guard} steps."
                )
            self._explore(tp, successor, path, guard, out)

    def _describe(self, tp: TwistedPair, steps: tuple[PieceStep, ...], last: PieceState) -> PieceDescriptor:
        datum = self.datum
        w = datum.identity
        for s in steps:
            w = w * s.u
        if w.length != sum(s.u.length for s in steps):
            raise InvariantBreach(f"Lengths of {[repr(s.u) for s in steps]} do not add up to l(w)={w.length}.")
        if last.J != last.Jp:
            raise InvariantBreach(f"Stabilized J={subset_text(last.J)} differs from Jp={subset_text(last.Jp)}.")
        if w.length + datum.nu(tp.J) - datum.nu(last.J) < 0:
            raise InvariantBreach(f"Negative total fibre dimension for w={w!r}.")
        exponent = w.length + datum.nu(tp.J) - datum.num_positive
        count = datum.order_poly().shift(exponent)
        return PieceDescriptor(
            pair=tp,
            steps=steps,
            w=w,
            J_inf=last.J,
            twist=last.y,
            exponent=exponent,
            count=count,
            dim=count.degree,
        )

    def orbit_data(self, sigma: PieceDescriptor) -> tuple[NodeSubset, WeylElement]:
        return sigma.J_inf, sigma.twist

    def piece_count(self, sigma: PieceDescriptor, quotient_by_delta: bool = False) -> CountPolynomial:
        if not quotient_by_delta:
            return sigma.count
        return sigma.count.divide_by_q_minus_one(self.datum.rank - len(sigma.pair.J))

    def fibre_dims(self, sigma: PieceDescriptor) -> list[int]:
        """l(u_n) + nu_{J_n} - nu_{J_{n+1}} for n = 0..r; J_{r+1} = J_r."""
        datum = self.datum
        dims = []
        for n, s in enumerate(sigma.steps):
            J_next = sigma.steps[n + 1].J if n < sigma.r else s.J
            dims.append(s.u.length + datum.nu(s.J) - datum.nu(J_next))
        return dims

    def valid_pairs(self) -> list[TwistedPair]:
        datum = self.datum
        pairs = []
        for J in datum.subsets():
            delta_J = datum.delta_subset(J)
            for y in datum.coset_reps(delta_J, side="right"):
                Jp, all_simple = datum.ad_subset(y, delta_J)
                if all_simple and datum.is_minimal(Jp, y, delta_J):
                    pairs.append(TwistedPair(J=J, y=y, Jp=Jp))
        return pairs

    def levi_order(self, nodes: NodeSubset) -> CountPolynomial:
        datum = self.datum
        torus = CountPolynomial(q_power=datum.nu(nodes), q_minus_one_power=datum.torus_rank)
        return torus * datum.poincare(datum.parabolic(nodes))

    def verify_sum(self, tp: TwistedPair, sample_qs: Iterable[int] = SAMPLE_QS) -> SumCheck:
        with self.tracer.start_as_current_span("pieces.verify_sum") as span:
            datum = self.datum
            descriptors = self.enumerate(tp)
            lhs = datum.poincare(sigma.w for sigma in descriptors)
            rhs = datum.poincare(datum.coset_reps(tp.Jp))
            injective = len({sigma.w for sigma in descriptors}) == len(descriptors)

            flags_J = datum.poincare(datum.coset_reps(tp.J))
            flags_Jp = rhs
            levi = self.levi_order(tp.Jp)
            uncancelled = {}
            for q in sample_qs:
                total = sum(sigma.count.evaluate(q) for sigma in descriptors)
                uncancelled[q] = (total, flags_J.evaluate(q) * flags_Jp.evaluate(q) * levi.evaluate(q))

            check = SumCheck(
                J=subset_json(tp.J),
                Jprime=subset_json(tp.Jp),
                y=element_json(tp.y),
                pieces=len(descriptors),
                lhs=lhs,
                rhs=rhs,
                injective=injective,
                uncancelled=uncancelled,
            )
            span.set_attribute("verify.holds", check.holds)
            if not check.holds:
                span.set_status(Status(StatusCode.ERROR, f"sum identity fails for {tp!r}"))
                logging.error(f"Sum identity fails for {tp!r}: {lhs} != {rhs}")
            return check

    def sweep(self) -> list[SumCheck]:
        with self.tracer.start_as_current_span("pieces.sweep") as span:
            checks = [self.verify_sum(tp) for tp in self.valid_pairs()]
            span.set_attribute("sweep.pairs", len(checks))
            span.set_attribute("sweep.failures", sum(1 for c in checks if not c.holds))
            return checks

    def descriptor_json(self, sigma: PieceDescriptor) -> dict[str, Any]:
        return sigma.to_json()
