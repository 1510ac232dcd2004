from tpeqw.config import SECTIONS
from tpeqw.schemas import SCHEMA_VERSION, ResultDocument, make_config_template

import pytest
from pydantic import ValidationError


def test_document_round_trip():
    document = ResultDocument(
        command='rate',
        inputs={'run': {'n_e': 1e19, 'seed': 2**63 + 1}},
        outputs={'rate': 7.493412345678901e10, 'orders': 2.9996, 'ladder': {'InPlaneZZ': 1.2e12}},
        warnings=('resonances overlap',),
    )
    assert ResultDocument.from_json(document.to_json()) == document
    assert document.schema_version == SCHEMA_VERSION


def test_document_rejects_unknown_version():
    with pytest.raises(ValidationError):
        ResultDocument(schema_version=SCHEMA_VERSION + 1, command='rate')


def test_document_text():
    document = ResultDocument(command='bell', outputs={'chsh_analytic': 2.3629, 'events': 10})
    text = document.to_text()
    assert text.startswith('bell:')
    assert 'chsh_analytic = 2.3629' in text
    assert 'events = 10' in text


def test_template_lists_every_key():
    template = make_config_template()
    for section, model in SECTIONS.items():
        assert f'[{section}]' in template
        for name in model.__fields__:
            assert f'{name} = ' in template


def test_template_carries_units():
    template = make_config_template()
    assert 'QW transition energy [eV], required' in template
    assert '# vertical cavity height [nm], required' in template
    assert '# n_e = 1e+19' in template
