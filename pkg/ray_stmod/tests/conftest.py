import pytest
import ray

from ray_stmod.field import FieldSpec
from ray_stmod.group import parse_group
from ray_stmod.projective import decompose_regular


@pytest.fixture(scope="session")
def gf2():
    return FieldSpec(2)


@pytest.fixture(scope="session")
def gf3():
    return FieldSpec(3)


@pytest.fixture(scope="session")
def gf4():
    return FieldSpec.from_order(4)


@pytest.fixture(scope="session")
def c3():
    return parse_group("C3")


@pytest.fixture(scope="session")
def c9():
    return parse_group("C9")


@pytest.fixture(scope="session")
def s3():
    return parse_group("S3")


@pytest.fixture(scope="session")
def a4():
    return parse_group("A4")


@pytest.fixture(scope="session")
def q8():
    return parse_group("Q8")


@pytest.fixture(scope="session")
def c3xs3():
    return parse_group("C3xS3")


@pytest.fixture(scope="session")
def c3_table(c3, gf3):
    return decompose_regular(c3, gf3)


@pytest.fixture(scope="session")
def c9_table(c9, gf3):
    return decompose_regular(c9, gf3)


@pytest.fixture(scope="session")
def a4_table(a4, gf4):
    return decompose_regular(a4, gf4)


@pytest.fixture
def ray_start_2_cpus():
    address_info = ray.init(num_cpus=2, include_dashboard=False)
    yield address_info
    # The code after the yield will run as teardown code.
    ray.shutdown()
