"""Shared fixtures: the switching-AR(2) model documents used across tests."""

import pytest

AR2_NESTED_DOC = """\
# nested AR(2) prior structure
[model]
name = ar2
kind = single
k = 1

[group.alpha]
component = normal_prec(m=0.0, vprec=1.0)

[group.phi1]
component = normal_prec(m=0.5, vprec=4.0)

[group.phi2]
component = normal_prec(m=0.0, vprec=4.0)

[group.sigma_prec]
component = gamma(a_breve=2.0, b_breve=1.0)

[constraint]
regularity = ar2_stationarity
initial_state = uniform
"""

MSIAH2_DOC = """\
# two-regime switching AR(2): every parameter switches
[model]
name = msiah2_ar2
kind = markov_switching
k = 2

[group.alpha]
component = normal_prec(m=0.0, vprec=0.5)
component = normal_prec(m=0.0, vprec=0.5)

[group.phi1]
component = normal_prec(m=0.5, vprec=2.0)
component = normal_prec(m=0.5, vprec=2.0)

[group.phi2]
component = normal_prec(m=0.0, vprec=2.0)
component = normal_prec(m=0.0, vprec=2.0)

[group.sigma_prec]
component = gamma(a_breve=1.5, b_breve=0.5)
component = gamma(a_breve=1.5, b_breve=0.5)

[eta]
row = dirichlet(d=[1.0, 1.0])
row = dirichlet(d=[1.0, 1.0])

[constraint]
regularity = msar2_stationarity
initial_state = uniform
"""

MSI2_DOC = """\
# intermediate model: only the intercept switches
[model]
name = msi2_ar2
kind = markov_switching
k = 2

[delta]
phi1 = normal_prec(m=0.5, vprec=4.0)
phi2 = normal_prec(m=0.0, vprec=4.0)
sigma_prec = gamma(a_breve=2.0, b_breve=1.0)

[group.alpha]
component = normal_prec(m=0.0, vprec=0.5)
component = normal_prec(m=0.0, vprec=0.5)

[eta]
row = dirichlet(d=[1.0, 1.0])
row = dirichlet(d=[1.0, 1.0])

[constraint]
regularity = ar2_stationarity
initial_state = uniform
"""


@pytest.fixture
def ar2_doc():
    return AR2_NESTED_DOC


@pytest.fixture
def msiah2_doc():
    return MSIAH2_DOC


@pytest.fixture
def msi2_doc():
    return MSI2_DOC


@pytest.fixture
def model_paths(tmp_path):
    paths = {}
    for name, doc in (("ar2", AR2_NESTED_DOC), ("msiah2", MSIAH2_DOC), ("msi2", MSI2_DOC)):
        path = tmp_path / f"{name}.model"
        path.write_text(doc, encoding="utf-8")
        paths[name] = str(path)
    return paths
