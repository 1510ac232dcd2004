"""
variables and functions here are used to describe result documents and to
generate the configuration template from the records' fields
"""
from typing import Any, Dict, Tuple, Type

from pydantic import validator
from pydantic.fields import ModelField

from .config import SECTIONS
from .fields import Quantity
from .models import Model

SCHEMA_VERSION: int = 1

TEMPLATE_HEADER: str = (
    "# tpeqw run configuration\n"
    "# keys left commented out take their default, required keys have none\n"
)

SECTION_TEMPLATE: str = "[{section}]\n{fields}\n"


class ResultDocument(Model):
    """
    Machine readable output of a command.

    Attributes:
        schema_version (int): version of this document layout
        command (str): the command that produced it
        inputs (Dict[str, Any]): echo of the configuration used
        outputs (Dict[str, Any]): flat key-value results
        warnings (Tuple[str, ...]): non fatal diagnostics
    """
    schema_version: int = SCHEMA_VERSION
    command: str
    inputs: Dict[str, Any] = {}
    outputs: Dict[str, Any] = {}
    warnings: Tuple[str, ...] = ()

    @validator('schema_version')
    def _known_version(cls, version):
        if version != SCHEMA_VERSION:
            raise ValueError(f'Unsupported schema version {version}, expected {SCHEMA_VERSION}')
        return version

    def to_json(self) -> str:
        return self.json(indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> 'ResultDocument':
        return cls.parse_raw(text)

    def to_text(self) -> str:
        """Human summary, one `key = value` line per output"""
        lines = [f'{self.command}:']
        for key, value in self.outputs.items():
            if isinstance(value, float):
                value = f'{value:.6g}'
            lines.append(f'  {key} = {value}')
        lines.extend(f'  warning: {w}' for w in self.warnings)
        return '\n'.join(lines)


def make_field_template(field: ModelField) -> str:
    """Commented INI lines for one field: description with unit, then the key"""
    unit = field.field_info.extra.get('unit', Quantity.DIMENSIONLESS)
    description = field.field_info.description or field.name.replace('_', ' ')
    if unit != Quantity.DIMENSIONLESS:
        description += f' [{unit}]'
    if field.required:
        return f'# {description}, required\n{field.name} = '
    default = '' if field.default is None else field.default
    return f'# {description}\n# {field.name} = {default}'


def make_section_template(section: str, model: Type[Model]) -> str:
    fields = '\n'.join(make_field_template(f) for f in model.__fields__.values())
    return SECTION_TEMPLATE.format(section=section, fields=fields)


def make_config_template() -> str:
    """A commented INI template covering every configurable key"""
    sections = [make_section_template(name, model) for name, model in SECTIONS.items()]
    return TEMPLATE_HEADER + "\n" + "\n".join(sections)
