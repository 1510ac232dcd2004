from typing import Any, Optional
from pydantic import Field


class _QuantityMaker:
    """
    Helper class to declare fields that hold physical quantities.

    Instead of instantiating this class the developer should use
    the already instantiated `tpeqw.fields.Quantity`.

    Attributes:
        DIMENSIONLESS (str): (class attribute) unit label for pure numbers
    """
    DIMENSIONLESS = '1'

    def __call__(
        self,
        default: Any = ...,
        *,
        unit: str = DIMENSIONLESS,
        description: Optional[str] = None,
        **kws,
    ) -> Any:
        """
        Args:
            default (Any): the default value, required when omitted
            unit (str): the unit the value is expressed in at the API boundary
            description (str, optional): a short human description used by the config template
            kws: pydantic constraints (gt, ge, le, ...)
        Returns:
            A `pydantic.Field` with the unit stored as extra metadata
        Raises:
            ValueError: if the unit label is empty
        """
        if not unit:
            raise ValueError('A quantity requires a unit label, use Quantity.DIMENSIONLESS for pure numbers')
        return Field(default, unit=unit, description=description, **kws)


Quantity = _QuantityMaker()


def unit_of(model: type, name: str) -> str:
    """Returns the unit label declared for a model field, dimensionless if none was declared"""
    field = model.__fields__[name]
    return field.field_info.extra.get('unit', Quantity.DIMENSIONLESS)
