"""Module categories over graded pointed and Tambara-Yamagami fusion categories."""

__version__ = "0.1.0"
FORMAT = "cliffcat/1"

from .errors import CliffcatError  # noqa: E402
from .groups import FiniteGroup, Subgroup, parse_group_ref  # noqa: E402
from .cohomology import Cochain, cohomology_group  # noqa: E402
from .pointed import ModuleData, PointedCategory, module_classes  # noqa: E402

__all__ = ["CliffcatError", "FiniteGroup", "Subgroup", "parse_group_ref", "Cochain",
           "cohomology_group", "ModuleData", "PointedCategory", "module_classes",
           "__version__", "FORMAT"]
