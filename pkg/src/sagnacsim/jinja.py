from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import TYPE_CHECKING, Any

from jinja2 import BaseLoader, Environment, TemplateSyntaxError, Undefined, make_logging_undefined

from .shared import SagnacSimConfigError

if TYPE_CHECKING:
    from collections.abc import Mapping

    from .configtypes import SweepConfigFileT

# Use a named logger instead of root logger
logger = logging.getLogger("sagnacsim")

# Log a warning when a template refers to an undefined variable.
LoggingUndefined = make_logging_undefined(logger=logger, base=Undefined)

######################################################################
# SagnacSimJinjaStringEnvironment


class SagnacSimJinjaStringEnvironment(Environment):
    """Jinja Environment for output path templates."""

    def __init__(self) -> None:
        """Constructor."""
        super().__init__(loader=BaseLoader(), undefined=LoggingUndefined)


jinjaenv = SagnacSimJinjaStringEnvironment()

######################################################################
# Jinja helpers


def render_template_str(template_src: str, template_vars: Mapping[str, Any], one_line: bool = True) -> str:
    """Render given string template.

    Args:
        template_src (str): Jinja source to compile into a template.
        template_vars (Mapping[str, Any]): Template variables.
        one_line (bool, optional): True if result should be a single line. Defaults to True.

    Returns:
        str
    """
    template_src = jinjaenv.from_string(template_src).render(**template_vars)

    if one_line:
        # Remove newlines, tabs, strings of spaces, etc.
        template_src = re.sub(r"\s+", " ", template_src).strip()

    return template_src


def render_output_path(path: Path, config: SweepConfigFileT, directive: str = "output") -> Path:
    """Render an output path whose name may refer to configuration values, e.g. "{{ scenario }}_{{ seed }}.csv".

    Args:
        path (Path): Output path, possibly a template.
        config (SweepConfigFileT): Configuration directives; the template variables.
        directive (str): Directive holding the path, for error reporting.

    Returns:
        Path
    """
    path_str = str(path)

    if "{{" not in path_str and "{%" not in path_str:
        return path

    template_vars = {key: value for key, value in config.items() if not key.startswith("_")}

    try:
        rendered = render_template_str(path_str, template_vars)
    except TemplateSyntaxError as err:
        raise SagnacSimConfigError(f"Invalid template: {err.message}", config, directive) from None

    if not rendered:
        raise SagnacSimConfigError("Template renders to an empty path.", config, directive)

    logger.debug(f"Rendered '{path_str}' as '{rendered}'")

    return Path(rendered)
