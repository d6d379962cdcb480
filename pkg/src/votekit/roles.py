"""Role hierarchy for authorization decisions."""

from __future__ import annotations

import enum


class Role(enum.Enum):
    # Declaration order is the privilege order, weakest first.
    VOTER = "voter"
    OFFICER = "officer"
    ADMIN = "admin"
    SUPER_ADMIN = "super_admin"

    @property
    def rank(self) -> int:
        return list(Role).index(self)

    def at_least(self, required: "Role") -> bool:
        return self.rank >= required.rank
