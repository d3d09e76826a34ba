"""The trivial solver: no constraint domain beyond Herbrand equality.

Used for plain logic programs (SLD and variant tabling). Projections are
empty, every store entails every other, and answers are compared by the
(empty) store alone, so answer equality reduces to skeleton variance.
"""

from __future__ import annotations

from typing import Any, Sequence

from ..terms import Bindings, Struct
from .base import ConstraintSolver, EntailOrder, ProjectedStore


class NullSolver(ConstraintSolver):
    name = "none"
    mirrors_numbers = False

    def is_constraint_functor(self, name: str, arity: int) -> bool:
        return False

    def add_goal(self, goal: Struct, binds: Bindings) -> bool:
        raise AssertionError("the null solver has no constraint surface")

    def store_projection(self, var_ids: Sequence[int]) -> ProjectedStore:
        return ProjectedStore(len(var_ids), ())

    def call_entail(self, early: ProjectedStore, proj_gen: ProjectedStore) -> bool:
        return True

    def answer_compare(self, early: ProjectedStore, proj_ans: ProjectedStore) -> EntailOrder | None:
        return EntailOrder.LESS_EQ

    def entails_projection(self, var_ids: Sequence[int], proj: ProjectedStore) -> bool:
        return True

    def apply_answer(self, var_ids: Sequence[int], proj: ProjectedStore) -> bool:
        return True

    def checkpoint(self) -> int:
        return 0

    def rollback(self, token: int) -> None:
        pass

    def clone_state(self) -> Any:
        return None

    def install_state(self, state: Any) -> None:
        pass

    def empty_state(self) -> Any:
        return None

    def render_projected(self, proj: ProjectedStore, names: Sequence[str]) -> list[str]:
        return []
