"""
Schema checks for decoded JSON documents
"""
from typing import Any, Dict, Iterable, List, Optional, Tuple

from .errors import SchemaViolation

Path = Tuple[Any, ...]


def render_path(path: Path) -> str:
    """('sets', 2) -> $.sets[2]"""
    rendered = "$"
    for segment in path:
        rendered += f"[{segment}]" if isinstance(segment, int) else f".{segment}"
    return rendered


class SchemaValidator:
    """
    Shape checks with JSON paths in every error.

    In strict mode unknown object fields are rejected; in lax mode they are
    collected in ``extras`` keyed by the path of their object so the emitter
    can put them back. Nested objects may carry the "format" field of the
    document they were emitted as; it must match ``format_version``.
    """

    def __init__(self, strict: bool = True, format_version: int = 1):
        self.strict = strict
        self.format_version = format_version
        self.extras: Dict[Path, Dict[str, Any]] = {}

    def fail(self, message: str, path: Path):
        raise SchemaViolation(message, render_path(path))

    def object(self, value: Any, path: Path, required: Iterable[str],
               optional: Iterable[str] = ()) -> Dict[str, Any]:
        if not isinstance(value, dict):
            self.fail("expected an object", path)
        required = tuple(required)
        missing = [key for key in required if key not in value]
        if missing:
            self.fail(f"missing field(s) {', '.join(missing)}", path)
        known = set(required) | set(optional)
        if path and "format" in value and "format" not in known:
            self.format_field(value["format"], path + ("format",))
            known.add("format")
        unknown = sorted(set(value) - known)
        if unknown:
            if self.strict:
                self.fail(f"unknown field(s) {', '.join(unknown)}", path)
            self.extras[path] = {key: value[key] for key in unknown}
        return value

    def format_field(self, value: Any, path: Path) -> int:
        if not isinstance(value, int) or isinstance(value, bool) or value != self.format_version:
            self.fail(f"unsupported format {value!r}, expected {self.format_version}", path)
        return value

    def integer(self, value: Any, path: Path, minimum: Optional[int] = None) -> int:
        # bool is an int subclass but never a valid count or id
        if not isinstance(value, int) or isinstance(value, bool):
            self.fail("expected an integer", path)
        if minimum is not None and value < minimum:
            self.fail(f"expected an integer >= {minimum}", path)
        return value

    def optional_integer(self, value: Any, path: Path, minimum: Optional[int] = None) -> Optional[int]:
        return None if value is None else self.integer(value, path, minimum)

    def boolean(self, value: Any, path: Path) -> bool:
        if not isinstance(value, bool):
            self.fail("expected true or false", path)
        return value

    def array(self, value: Any, path: Path) -> List[Any]:
        if not isinstance(value, list):
            self.fail("expected an array", path)
        return value

    def int_list(self, value: Any, path: Path, minimum: int = 0) -> List[int]:
        return [self.integer(item, path + (i,), minimum) for i, item in enumerate(self.array(value, path))]

    def int_keyed(self, value: Any, path: Path) -> Dict[int, Any]:
        """Object whose keys are canonical decimal renderings of non-negative integers"""
        if not isinstance(value, dict):
            self.fail("expected an object", path)
        keyed = {}
        for key, item in value.items():
            if not (key.isascii() and key.isdigit()) or str(int(key)) != key:
                self.fail(f"key {key!r} is not a non-negative integer", path)
            keyed[int(key)] = item
        return keyed
