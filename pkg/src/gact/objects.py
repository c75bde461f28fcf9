"""Shared object store: records, per-object mutual exclusion, guard wait lists.

Every object carries a boolean mutual-exclusion flag realized as a
non-blocking ``threading.Lock`` (``acquire(False)`` is an atomic
test-and-set with acquire semantics; ``release`` publishes). Fields are
only read or written by the engine while the owning activation holds
the flag, so the lock doubles as the memory-publication fence.

Objects are never reclaimed: the store is an arena that grows
monotonically and ids are never reused.
"""

from __future__ import annotations

import threading

SCHED_IDLE = 0
SCHED_ENQUEUED = 1
SCHED_RUNNING = 2


class ObjectRecord:
    __slots__ = (
        "id", "cls", "fields", "_flag", "owner",
        "sched_state", "waiters", "action_live", "rr_index",
    )

    def __init__(self, oid: int, cls, fields: list):
        self.id = oid
        self.cls = cls                    # compiled class descriptor
        self.fields = fields
        self._flag = threading.Lock()
        self.owner = None                 # activation id, for assertions
        self.sched_state = SCHED_IDLE
        self.waiters: list = []           # activations parked on this object's guards
        self.action_live = [False] * len(cls.actions)
        self.rr_index = 0                 # round-robin start for action scans

    def try_lock(self, owner_id) -> bool:
        """Atomic test-and-set of the mutual-exclusion flag."""
        if self._flag.acquire(False):
            self.owner = owner_id
            return True
        return False

    def unlock(self, owner_id) -> None:
        assert self.owner == owner_id, \
            f"unlock of object {self.id} by non-owner {owner_id} (owner {self.owner})"
        self.owner = None
        self._flag.release()

    @property
    def locked(self) -> bool:
        return self._flag.locked()

    def __repr__(self) -> str:
        return f"<{self.cls.name}#{self.id}>"


class ObjectStore:
    """Monotone arena of object records; allocation is concurrent-safe."""

    __slots__ = ("objects", "_alloc_lock")

    def __init__(self):
        self.objects: list[ObjectRecord] = []
        self._alloc_lock = threading.Lock()

    def alloc(self, cls, owner_id) -> ObjectRecord:
        """Create a record with the lock already held by owner_id.

        Initialization runs under the new object's flag, matching the
        rule that fields are only touched while the flag is held.
        """
        fields = list(cls.field_defaults)
        with self._alloc_lock:
            rec = ObjectRecord(len(self.objects), cls, fields)
            self.objects.append(rec)
        acquired = rec.try_lock(owner_id)
        assert acquired
        return rec

    def __len__(self) -> int:
        return len(self.objects)

    def dump(self) -> str:
        """One line per object: id, class, fields, flag state."""
        lines = []
        for rec in self.objects:
            pairs = ", ".join(
                f"{name}={_show(v)}"
                for name, v in zip(rec.cls.field_names, rec.fields)
            )
            lines.append(
                f"{rec.cls.name}#{rec.id}{{{pairs}}} lock={'1' if rec.locked else '0'}"
            )
        return "\n".join(lines)


def _show(v) -> str:
    if v is None:
        return "nil"
    if isinstance(v, ObjectRecord):
        return f"{v.cls.name}#{v.id}"
    if v is True:
        return "true"
    if v is False:
        return "false"
    return str(v)
