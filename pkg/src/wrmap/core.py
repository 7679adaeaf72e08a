"""Workload analyzer state machine.

The state is an immutable value: a finite set of available resources plus a
partial function from resource names to workload names, with the invariant
that the function's domain equals the available set. Operations take a state
and return a fresh state plus a three-valued report; any non-OK outcome
returns the input state unchanged, so callers can check "error preserves
state" by plain structural equality.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Union


class Report(enum.Enum):
    OK = "OK"
    ALREADY_MAPPED = "AlreadyMapped"
    NOT_MAPPED = "NotMapped"

    def __str__(self) -> str:
        return self.value


def check_token(value: str) -> str:
    """Validate a resource/workload identifier.

    Tokens must be non-empty and free of whitespace and commas so that the
    CSV and replay formats never need quoting.
    """
    if not isinstance(value, str) or not value:
        raise ValueError("token must be a non-empty string")
    for ch in value:
        if ch.isspace() or ch == ",":
            raise ValueError(f"token may not contain whitespace or commas: {value!r}")
    return value


@dataclass(frozen=True)
class AllocationState:
    """Immutable allocation: sorted (resource, workload) pairs.

    Pairs are kept sorted by resource id so equal states compare equal and
    serialization is deterministic. Resources are unique (the allocation is
    a function); several resources may carry the same workload.
    """

    pairs: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.pairs))
        object.__setattr__(self, "pairs", ordered)
        seen = set()
        for resource, workload in ordered:
            check_token(resource)
            check_token(workload)
            if resource in seen:
                raise ValueError(f"duplicate resource in allocation: {resource!r}")
            seen.add(resource)

    @property
    def allocation(self) -> dict[str, str]:
        return dict(self.pairs)

    @property
    def available_resources(self) -> frozenset[str]:
        return frozenset(resource for resource, _ in self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


Payload = Union[None, str, frozenset]


@dataclass(frozen=True)
class OpOutcome:
    """Result of one operation: next state, report, optional output."""

    state: AllocationState
    report: Report
    payload: Payload = None


def init() -> AllocationState:
    """The initial analyzer state: nothing available, nothing allocated."""
    return AllocationState()


def add(state: AllocationState, resource: str, workload: str) -> OpOutcome:
    """Bind a new resource to a workload.

    Fails with AlreadyMapped (state unchanged, no overwrite) when the
    resource is already known.
    """
    check_token(resource)
    check_token(workload)
    if resource in state.available_resources:
        return OpOutcome(state, Report.ALREADY_MAPPED)
    return OpOutcome(
        AllocationState(state.pairs + ((resource, workload),)), Report.OK
    )


def find(state: AllocationState, resource: str) -> OpOutcome:
    """Look up the workload allocated to a resource.

    Fails with NotMapped when the resource is unknown. Never changes state.
    """
    check_token(resource)
    allocation = state.allocation
    if resource not in allocation:
        return OpOutcome(state, Report.NOT_MAPPED)
    return OpOutcome(state, Report.OK, allocation[resource])


def map_query(state: AllocationState, rank: str) -> OpOutcome:
    """All resources currently allocated to the given workload.

    Total: an unknown workload yields the empty set with OK.
    """
    check_token(rank)
    matched = frozenset(
        resource for resource, workload in state.pairs if workload == rank
    )
    return OpOutcome(state, Report.OK, matched)


def available(state: AllocationState) -> frozenset[str]:
    """The set of resources the analyzer knows about."""
    return state.available_resources
