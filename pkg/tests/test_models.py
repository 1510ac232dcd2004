import pytest
from pydantic import ValidationError

from tpeqw import Model, Quantity
from tpeqw.bands import MaterialParams
from tpeqw.cavity import DeviceGeometry
from tpeqw.fields import unit_of


class Slab(Model):
    thickness: float = Quantity(unit='nm', gt=0, description='slab thickness')
    index: float = Quantity(1.0, ge=1)


def test_quantity_carries_its_unit():
    assert unit_of(Slab, 'thickness') == 'nm'
    assert unit_of(Slab, 'index') == Quantity.DIMENSIONLESS
    assert unit_of(MaterialParams, 'e_gap') == 'eV'
    assert unit_of(DeviceGeometry, 'device_area') == 'mm2'


def test_quantity_needs_a_unit_label():
    with pytest.raises(ValueError):
        Quantity(1.0, unit='')


def test_quantity_constraints():
    with pytest.raises(ValidationError):
        Slab(thickness=-1)
    assert Slab(thickness=5).index == 1.0


def test_models_are_frozen():
    slab = Slab(thickness=5)
    try:
        slab.thickness = 6
    except Exception as e:
        assert isinstance(e, TypeError)
    else:
        raise AssertionError('a frozen record was modified')


def test_models_are_hashable():
    assert hash(Slab(thickness=5)) == hash(Slab(thickness=5))
    assert len({Slab(thickness=5), Slab(thickness=5)}) == 1


def test_unknown_fields_are_rejected():
    with pytest.raises(ValidationError, match='width'):
        Slab(thickness=5, width=3)


def test_str_is_repr():
    slab = Slab(thickness=5)
    assert str(slab) == repr(slab)
