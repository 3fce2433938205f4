from .files import load_measure_file, read_element_set
from .elements import parse_element
from .specs import parse_group, parse_measure

__all__ = [
    "load_measure_file",
    "parse_element",
    "parse_group",
    "parse_measure",
    "read_element_set",
]
