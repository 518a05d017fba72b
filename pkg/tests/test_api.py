"""HTTP API tests with randomized program data."""

import pytest
from faker import Faker
from httpx import AsyncClient

fake = Faker()

pytestmark = pytest.mark.integration

SHALLOW_READ = 'def f(x: Dict[str, int]) -> int:\n    return x["A"]\n\nf({{"A": {value}}})\n'


def _word() -> str:
    return fake.word().replace('"', "")


@pytest.mark.asyncio
async def test_health_and_root(client: AsyncClient):
    response = await client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"
    response = await client.get("/")
    assert response.json()["message"] == "Gradual Soundness Playground API"


@pytest.mark.asyncio
async def test_check_accepts_well_typed_programs(client: AsyncClient):
    response = await client.post("/api/v1/programs/check", json={"source": SHALLOW_READ.format(value=1)})
    assert response.status_code == 200
    assert response.json() == {"ok": True, "diagnostics": []}


@pytest.mark.asyncio
async def test_check_reports_diagnostics(client: AsyncClient):
    response = await client.post("/api/v1/programs/check", json={"source": 'x: int = "a"\n'})
    data = response.json()
    assert response.status_code == 200
    assert data["ok"] is False
    (d,) = data["diagnostics"]
    assert d["code"] == "E-TYPE-MISMATCH" and d["line"] == 1


@pytest.mark.asyncio
async def test_check_reports_syntax_errors(client: AsyncClient):
    response = await client.post("/api/v1/programs/check", json={"source": "def f(:\n"})
    assert [d["code"] for d in response.json()["diagnostics"]] == ["E-SYNTAX"]


@pytest.mark.asyncio
async def test_empty_source_is_a_validation_error(client: AsyncClient):
    response = await client.post("/api/v1/programs/check", json={"source": ""})
    assert response.status_code == 422


@pytest.mark.asyncio
async def test_run_prints_random_strings(client: AsyncClient):
    for _ in range(5):
        word = _word()
        source = f'def echo(s: str) -> str:\n    return s\n\necho("{word}")\n'
        response = await client.post("/api/v1/programs/run", json={"source": source})
        assert response.status_code == 200
        data = response.json()
        assert data["outcome"] == "ok"
        assert data["output"] == [f'"{word}"']
        assert data["error"] is None


@pytest.mark.asyncio
async def test_run_reports_allowed_errors_with_metrics(client: AsyncClient):
    word = _word()
    response = await client.post("/api/v1/programs/run", json={"source": SHALLOW_READ.format(value=f'"{word}"')})
    data = response.json()
    assert response.status_code == 200
    assert data["outcome"] == "runtime"
    assert data["error"] == {"kind": "CastError", "message": "int expected, got str"}
    assert data["metrics"]["casts_executed"] == 1


@pytest.mark.asyncio
async def test_run_rejects_ill_typed_programs(client: AsyncClient):
    response = await client.post("/api/v1/programs/run", json={"source": "f()\n"})
    assert response.status_code == 422
    codes = [d["code"] for d in response.json()["detail"]["diagnostics"]]
    assert codes == ["E-UNKNOWN-MEMBER"]


@pytest.mark.asyncio
async def test_run_honours_the_step_budget(client: AsyncClient):
    source = "def spin() -> int:\n    while True:\n        pass\n\nspin()\n"
    response = await client.post("/api/v1/programs/run", json={"source": source, "step_budget": 50})
    assert response.json()["outcome"] == "timeout"


@pytest.mark.asyncio
async def test_bytecode_listing(client: AsyncClient):
    source = "def f(x: int) -> int:\n    return x\n\nf(1)\n"
    fast = await client.post("/api/v1/programs/bytecode", json={"source": source})
    plain = await client.post("/api/v1/programs/bytecode", json={"source": source, "optimized": False})
    assert "INVOKE_FUNCTION f fast" in fast.json()["listing"]
    assert "INVOKE_FUNCTION f checked" in plain.json()["listing"]
    assert plain.json()["optimized"] is False


@pytest.mark.asyncio
async def test_fuzz_endpoint(client: AsyncClient):
    response = await client.post("/api/v1/fuzz", json={"count": 10, "seed": 1})
    assert response.status_code == 200
    data = response.json()
    assert data["ok"] is True and data["violations"] == []
    assert sum(data["counts"].values()) == 10


@pytest.mark.asyncio
async def test_fuzz_count_is_bounded(client: AsyncClient):
    response = await client.post("/api/v1/fuzz", json={"count": 100_000})
    assert response.status_code == 422
