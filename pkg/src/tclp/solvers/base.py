"""The contract every constraint solver implements for the tabling engine.

The engine sees projected stores as opaque values: it only relies on the
number of placeholder positions and passes them back verbatim. A projection
is self-contained (fresh placeholder namespace, no shared mutable state with
the live store), so projections taken from one engine state can be compared
against or applied to another.

Projection comes in two steps: a cheap early part computed before the
entailment phase, and a final part run only when the entailment phase fails
and the store actually has to be kept. Solvers with no cheap early part use
the full projection as the early value and an identity final step.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Sequence

from ..errors import LoadError
from ..terms import Bindings, Struct, Term


class EntailOrder(Enum):
    LESS_EQ = "=<"   # new store entails (is at most as general as) the old one
    GREATER = ">"    # old store strictly entails the new one


@dataclass(frozen=True)
class ProjectedStore:
    """Projection of a store onto an ordered variable list.

    `var_count` is the length of the original variable list; positions
    0..var_count-1 act as the placeholder variables. `payload` is
    solver-specific data over those positions.
    """

    var_count: int
    payload: Any


class ConstraintSolver(ABC):
    """Live constraint store plus the operations the tabling engine needs.

    One instance is confined to one engine run (single-threaded). Checkpoint
    tokens must be used LIFO within one execution unit; cross-unit state is
    moved with clone_state/install_state.
    """

    name: str = "?"
    #: When true, the engine mirrors Var-to-number bindings into the store
    #: instead of binding them in the Herbrand environment.
    mirrors_numbers: bool = False

    # -- surface syntax -----------------------------------------------------

    @abstractmethod
    def is_constraint_functor(self, name: str, arity: int) -> bool:
        """Does this goal functor belong to the solver's constraint surface?"""

    def validate_goal(self, goal: Struct) -> None:
        """Load-time shape check; raise LoadError for malformed constraints."""

    @abstractmethod
    def add_goal(self, goal: Struct, binds: Bindings) -> bool:
        """Add a constraint goal to the live store. False iff inconsistent."""

    # -- projection and entailment (the generic interface) -------------------

    @abstractmethod
    def store_projection(self, var_ids: Sequence[int]) -> ProjectedStore:
        """Projection of the live store onto var_ids (one-step form)."""

    def early_call_projection(self, var_ids: Sequence[int]) -> Any:
        return self.store_projection(var_ids)

    def final_call_projection(self, var_ids: Sequence[int], early: Any) -> ProjectedStore:
        return early

    @abstractmethod
    def call_entail(self, early: Any, proj_gen: ProjectedStore) -> bool:
        """True iff the live store (restricted to the early projection's
        variables) entails proj_gen. Must not observably mutate the store."""

    def early_ans_projection(self, var_ids: Sequence[int]) -> Any:
        return self.store_projection(var_ids)

    def final_ans_projection(self, var_ids: Sequence[int], early: Any) -> ProjectedStore:
        return early

    @abstractmethod
    def answer_compare(self, early: Any, proj_ans: ProjectedStore) -> EntailOrder | None:
        """LESS_EQ if current ⊑ stored (equality included), GREATER if
        stored ⊏ current strictly, None if incomparable."""

    @abstractmethod
    def apply_answer(self, var_ids: Sequence[int], proj: ProjectedStore) -> bool:
        """Conjoin proj (positionally identified with var_ids) onto the live
        store. On inconsistency the store is left unchanged (internal
        rollback) and False is returned."""

    @abstractmethod
    def entails_projection(self, var_ids: Sequence[int], proj: ProjectedStore) -> bool:
        """True iff the live store entails proj rebased onto var_ids."""

    # -- state management -----------------------------------------------------

    @abstractmethod
    def checkpoint(self) -> int:
        """Token for the current store state; rollback restores it exactly."""

    @abstractmethod
    def rollback(self, token: int) -> None: ...

    @abstractmethod
    def clone_state(self) -> Any:
        """Self-contained copy of the live store (for suspended consumers)."""

    @abstractmethod
    def install_state(self, state: Any) -> None:
        """Replace the live store with a copy of `state`; resets checkpoints."""

    def reset(self) -> None:
        self.install_state(self.empty_state())

    @abstractmethod
    def empty_state(self) -> Any: ...

    # The engine interleaves execution units; a unit that hands control to
    # the scheduler saves its live store (including undo history, so its
    # checkpoint tokens stay valid) and restores it afterwards.
    def save_context(self) -> Any:
        return self.clone_state()

    def restore_context(self, ctx: Any) -> None:
        self.install_state(ctx)

    # -- engine binding hooks --------------------------------------------------

    def knows(self, vid: int) -> bool:
        """Does the live store constrain this variable?"""
        return False

    def bind_number(self, vid: int, value) -> bool:
        """Mirror a Var=number binding into the store (mirrors_numbers only)."""
        raise NotImplementedError

    def alias(self, vid: int, other: int) -> bool:
        """Record that vid and other denote the same value."""
        return True

    # -- rendering ---------------------------------------------------------------

    @abstractmethod
    def render_projected(self, proj: ProjectedStore, names: Sequence[str]) -> list[str]:
        """Canonical human-readable constraint strings, one per constraint."""
