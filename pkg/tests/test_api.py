"""Tests for the HTTP surface."""

import httpx
import pytest
from fastapi.testclient import TestClient

from app.main import app


@pytest.fixture
def client():
    with TestClient(app) as test_client:
        yield test_client


class TestServiceEndpoints:
    """Tests for /health and /."""

    def test_health(self, client):
        """Should report a healthy service."""
        response = client.get("/health")
        assert response.status_code == 200
        data = response.json()
        assert data["status"] == "healthy"
        assert data["service"] == "ppres"
        assert "timestamp" in data

    def test_root(self, client):
        """Should point at the docs."""
        assert client.get("/").json()["docs"] == "/docs"

    async def test_check_async(self):
        """Should serve requests through the ASGI transport."""
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport, base_url="http://test") as ac:
            response = await ac.post("/check", json={"left": "x < 0", "right": "0 < x", "t_max": 1, "radius": 1})
        assert response.status_code == 200
        assert response.json()["witness"]["assignment"] == {"x": 1}


class TestFormulaEndpoints:
    """Tests for /formulas/parse and /formulas/eval."""

    def test_parse(self, client):
        """Should return the canonical text."""
        response = client.post("/formulas/parse", json={"text": "E y. 2*y = x"})
        assert response.status_code == 200
        assert "stats" not in response.json()

    def test_parse_error(self, client):
        """Should return 400 with the parser message."""
        response = client.post("/formulas/parse", json={"text": "x < < 3"})
        assert response.status_code == 400
        assert "column" in response.json()["detail"]

    def test_empty_text(self, client):
        """Should reject empty formula text at validation."""
        assert client.post("/formulas/parse", json={"text": ""}).status_code == 422

    def test_eval_enumeration(self, client, intervals_text):
        """Should enumerate bounded quantifiers."""
        response = client.post("/formulas/eval", json={"text": intervals_text, "t": 2, "assignment": {"x": 5}})
        assert response.json() == {"value": True, "method": "enumeration"}

    def test_eval_cooper(self, client):
        """Should decide unbounded quantifiers classically."""
        response = client.post("/formulas/eval", json={"text": "E y. 2*y = x", "t": 0, "assignment": {"x": 3}})
        assert response.json() == {"value": False, "method": "cooper"}

    def test_eval_missing_binding(self, client):
        """Should return 400 naming the variable."""
        response = client.post("/formulas/eval", json={"text": "x < y", "t": 0, "assignment": {"x": 1}})
        assert response.status_code == 400
        assert "y" in response.json()["detail"]

    def test_eval_negative_t(self, client):
        """Should reject negative t at validation."""
        response = client.post("/formulas/eval", json={"text": "x < 0", "t": -1, "assignment": {"x": 1}})
        assert response.status_code == 422


class TestEliminationEndpoints:
    """Tests for /eliminate and /qfree."""

    def test_eliminate(self, client):
        """Should return a bounded formula with stats."""
        response = client.post("/eliminate", json={"text": "E y. 0 < y /\\ y < x"})
        assert response.status_code == 200
        data = response.json()
        assert data["stats"]["quantifiers_eliminated"] == 1
        assert data["stats"]["unbounded_remaining"] == 0

    def test_qfree(self, client):
        """Should return a quantifier-free formula."""
        response = client.post("/qfree", json={"text": "E y. 2*y = x"})
        assert response.status_code == 200
        assert "E " not in response.json()["formula"]

    def test_qfree_ineligible(self, client):
        """Should return 422 with the eligibility report."""
        response = client.post("/qfree", json={"text": "E y. t*y = x"})
        assert response.status_code == 422
        detail = response.json()["detail"]
        assert detail["eligible"] is False
        assert detail["violations"][0]["offending"] == "t*y"

    def test_qfree_expansion_limit(self, client):
        """Should return 413 once the budget is exhausted."""
        response = client.post("/qfree", json={"text": "E y. D[5](y - x)", "expansion_limit": 1})
        assert response.status_code == 413


class TestCheckEndpoint:
    """Tests for /check."""

    def test_pass(self, client):
        """Should report a pass with the grid."""
        response = client.post(
            "/check",
            json={"left": "E y. 2*y = x", "right": "D[2](x)", "t_min": 0, "t_max": 2, "radius": 2},
        )
        data = response.json()
        assert data["status"] == "pass"
        assert data["points_checked"] == 15
        assert "witness" not in data

    def test_arity_mismatch(self, client):
        """Should return 400."""
        response = client.post("/check", json={"left": "x < 0", "right": "y < 0", "t_max": 1, "radius": 1})
        assert response.status_code == 400

    def test_inverted_range(self, client):
        """Should return 400 for t_min > t_max."""
        response = client.post("/check", json={"left": "x < 0", "right": "x < 0", "t_min": 3, "t_max": 1})
        assert response.status_code == 400


class TestCountEndpoint:
    """Tests for /count."""

    def test_count_with_fit(self, client, intervals_text):
        """Should return the table and an exact empirical fit."""
        response = client.post(
            "/count",
            json={
                "text": intervals_text,
                "variables": ["x"],
                "t_min": 1,
                "t_max": 8,
                "upper": "2t^2 + t",
                "fit_modulus": 1,
                "fit_degree": 2,
            },
        )
        assert response.status_code == 200
        data = response.json()
        assert [row["count"] for row in data["table"]["rows"]] == [t * t + t for t in range(1, 9)]
        assert data["fit"]["exact"] is True

    def test_count_without_fit(self, client):
        """Should omit the fit."""
        response = client.post("/count", json={"text": "0 != 0", "variables": ["x"], "t_max": 2, "upper": "t"})
        assert response.status_code == 200
        assert "fit" not in response.json()

    def test_half_fit(self, client):
        """Should require modulus and degree together."""
        response = client.post(
            "/count", json={"text": "x < 0", "variables": ["x"], "upper": "t", "fit_modulus": 2}
        )
        assert response.status_code == 400

    def test_unbounded(self, client):
        """Should return 400 for a family with unbounded quantifiers."""
        response = client.post("/count", json={"text": "E y. y < x", "variables": ["x"], "t_max": 1, "upper": "t"})
        assert response.status_code == 400
