"""Python 3.10 fallback for ``enum.StrEnum`` (added in 3.11)."""

try:
    from enum import StrEnum
except ImportError:  # pragma: no cover - Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):  # type: ignore[no-redef]
        """Enum whose members are also strings; mirrors the 3.11 stdlib class."""

        def __str__(self) -> str:
            return str(self.value)

        def __format__(self, format_spec: str) -> str:
            return str(self.value).__format__(format_spec)

        @staticmethod
        def _generate_next_value_(name, start, count, last_values):  # type: ignore[override]
            return name.lower()


__all__ = ["StrEnum"]
