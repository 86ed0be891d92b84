"""JSON schemas for command-line inputs and reports."""

_int_vector = {"type": "array", "items": {"type": "integer"}}
_int_matrix = {"type": "array", "items": _int_vector}
_rational = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"},
    ]
}

RING_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "graded ring",
    "type": "object",
    "properties": {
        "kind": {"enum": ["polynomial", "semigroup"]},
        "n": {"type": "integer", "minimum": 1},
        "degrees": _int_matrix,
        "exponents": _int_matrix,
        "grading_map": {**_int_matrix, "minItems": 1},
        "names": {"type": "array", "items": {"type": "string"}},
        "chamber": {**_int_matrix, "description": "generators of a chamber (roundtrip)"},
    },
    "required": ["kind"],
    "allOf": [
        {
            "if": {"properties": {"kind": {"const": "polynomial"}}},
            "then": {"required": ["degrees"]},
        },
        {
            "if": {"properties": {"kind": {"const": "semigroup"}}},
            "then": {"required": ["exponents", "grading_map"]},
        },
    ],
    "additionalProperties": False,
}

TORIC_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "multi-section ring of a toric variety",
    "type": "object",
    "properties": {
        "variety": {
            "type": "object",
            "properties": {
                "rays": {**_int_matrix, "minItems": 1},
                "cones": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
                "names": {"type": "array", "items": {"type": "string"}},
            },
            "required": ["rays", "cones"],
            "additionalProperties": False,
        },
        "divisors": {"type": "array", "items": {"type": "array", "items": _rational}},
    },
    "required": ["variety", "divisors"],
    "additionalProperties": False,
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "report",
    "type": "object",
    "properties": {
        "command": {"type": "string"},
        "input": {"type": ["string", "null"]},
        "options": {"type": "object"},
        "results": {"type": ["object", "array"]},
        "verification": {
            "type": "object",
            "additionalProperties": {"type": "boolean"},
        },
        "ok": {"type": "boolean"},
        "timing": {"type": "object"},
    },
    "required": ["command", "results", "verification", "ok"],
    "additionalProperties": False,
}
