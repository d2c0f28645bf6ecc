from typing import Any, Union


def _scalar(value: Any, precision: int) -> str:
    if isinstance(value, bool) or value is None:
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.{precision}f}"
    return str(value)


def format_object_to_string(
    obj: Union[dict, list, Any],
    indent: int = 2,
    level: int = 0,
    precision: int = 4,
) -> str:
    """
    Renders nested dicts and lists as indented "key: value" rows.

    Dict keys keep their insertion order, floats are printed with a
    fixed precision and booleans in lower case, so equal inputs render
    to identical text.

    Args:
        obj: The object to format.
        indent (int): Spaces per nesting level.
        level (int): Current nesting level (used internally).
        precision (int): Digits after the point for floats.

    Returns:
        str: The rendered text.
    """
    lines = []
    prefix = " " * (level * indent)

    if isinstance(obj, dict):
        for key, value in obj.items():
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{prefix}{key}:")
                lines.append(
                    format_object_to_string(
                        value, indent, level + 1, precision
                    )
                )
            elif isinstance(value, (dict, list)):
                lines.append(f"{prefix}{key}: none")
            else:
                lines.append(
                    f"{prefix}{key}: {_scalar(value, precision)}"
                )
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)):
                lines.append(f"{prefix}-")
                lines.append(
                    format_object_to_string(
                        item, indent, level + 1, precision
                    )
                )
            else:
                lines.append(f"{prefix}- {_scalar(item, precision)}")
    else:
        lines.append(f"{prefix}{_scalar(obj, precision)}")

    return "\n".join(lines)


def format_bits(bits: int) -> str:
    """Bit count with a binary-unit byte size, e.g. "8192 bits (1.0 KiB)"."""
    size = bits / 8
    for unit in ("B", "KiB", "MiB", "GiB"):
        if size < 1024 or unit == "GiB":
            return f"{bits} bits ({size:.1f} {unit})"
        size /= 1024
    return f"{bits} bits"
