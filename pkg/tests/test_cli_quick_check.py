"""verify-cert must reject non-certificate JSON with an input error."""

import json

from diffalg.cli import run


def test_verify_cert_rejects_non_certificate_json(tmp_path):
    p = tmp_path / "list.json"
    p.write_text(json.dumps(["a0"]))
    code, rep = run(["verify-cert", str(p)])
    assert code == 1 and "error" in rep
    p2 = tmp_path / "dict.json"
    p2.write_text(json.dumps({"chain": []}))
    code2, rep2 = run(["verify-cert", str(p2)])
    assert code2 == 1 and "error" in rep2
