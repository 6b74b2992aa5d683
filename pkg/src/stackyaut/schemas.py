"""JSON schemas for CLI input documents."""

SCHEMA_VERSION = "1"

_int = {"type": "integer"}
_ivec = {"type": "array", "items": _int}
_imat = {"type": "array", "items": _ivec}

_group = {
    "type": "object",
    "properties": {
        "free_rank": {"type": "integer", "minimum": 0},
        "torsion": {"type": "array", "items": {"type": "integer", "minimum": 1}},
    },
    "required": ["free_rank", "torsion"],
    "additionalProperties": False,
}

_fan = {
    "type": "object",
    "properties": {
        "dim": {"type": "integer", "minimum": 0},
        "rays": _imat,
        "cones": _imat,
        "multipliers": {"type": "array", "items": {"type": "integer", "minimum": 1}},
    },
    "required": ["dim", "rays", "cones"],
    "additionalProperties": False,
}

_finite_group = {
    "type": "object",
    "oneOf": [
        {"required": ["table"], "properties": {"table": _imat}, "additionalProperties": False},
        {
            "required": ["torsion"],
            "properties": {"torsion": {"type": "array", "items": {"type": "integer", "minimum": 1}}},
            "additionalProperties": False,
        },
        {
            "required": ["symmetric"],
            "properties": {"symmetric": {"type": "integer", "minimum": 1, "maximum": 5}},
            "additionalProperties": False,
        },
    ],
}

PAYLOADS = {
    "stacky_fan": {
        "type": "object",
        "properties": {"n": _group, "beta": _imat, "fan": _fan},
        "required": ["n", "beta", "fan"],
        "additionalProperties": False,
    },
    "matrix": {
        "type": "object",
        "properties": {"n": _group, "matrix": _imat},
        "required": ["n", "matrix"],
        "additionalProperties": False,
    },
    "weights": {
        "type": "object",
        "properties": {"weights": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 2}},
        "required": ["weights"],
        "additionalProperties": False,
    },
    "crossed_module": {
        "type": "object",
        "properties": {"g2": _finite_group, "g1": _finite_group, "phi": _ivec, "action": _imat},
        "required": ["g2", "g1", "phi"],
        "additionalProperties": False,
    },
}

DOCUMENT = {
    "type": "object",
    "properties": {
        "schema_version": {"type": "string", "const": SCHEMA_VERSION},
        "kind": {"enum": sorted(PAYLOADS)},
        "payload": {"type": "object"},
    },
    "required": ["schema_version", "kind", "payload"],
    "additionalProperties": False,
}
