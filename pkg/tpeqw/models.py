"""
Contains the base Model every parameter record and document inherits from
"""

from typing import TypeVar
from pydantic import BaseModel, Extra


class Model(BaseModel):
    """
    The base model for physical parameter records.
    Inherits directly from pydantic.BaseModel

    Records are immutable and hashable once built, so they can be shared between
    threads and used as cache keys. Unknown fields are rejected by name.

    Example:
        ```py
        from tpeqw.models import Model
        from tpeqw.fields import Quantity

        class Slab(Model):
            thickness: float = Quantity(unit='nm', gt=0)
        ```
    """

    class Config:
        frozen = True
        extra = Extra.forbid
        arbitrary_types_allowed = True

    def __str__(self) -> str:
        return f"{self!r}"


M = TypeVar("M", bound=Model)
