from skyline_tools.utils.formatted_string import (
    format_bits,
    format_object_to_string,
)

__all__ = ["format_bits", "format_object_to_string"]
