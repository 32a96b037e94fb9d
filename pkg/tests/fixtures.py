"""Shared data fixtures built from published counts."""

from webcred.corpus import CREDIBLE, NON_CREDIBLE, ClaimEvidence

# (claims, non-credible, credible, model agrees on non-credible, model agrees on credible)
TABLE6 = {"true": (5, 57, 39, 40, 31), "false": (5, 48, 32, 34, 24)}
TABLE6_FRACTIONS = {"true": (0.81, 0.79), "false": (0.70, 0.75)}


def table6_fixture():
    """Annotated evidence plus model predictions realizing the published counts."""
    evidence, predictions = [], {}
    for truth, (n_claims, non, cred, ok_non, ok_cred) in TABLE6.items():
        claims = [ClaimEvidence(f"{truth}-{i}", truth == "true") for i in range(n_claims)]
        labelled = [(NON_CREDIBLE, j < ok_non) for j in range(non)] + [(CREDIBLE, j < ok_cred) for j in range(cred)]
        for k, (human, agree) in enumerate(labelled):
            url = f"https://{truth}{k:03d}.example/"
            ev = claims[k % n_claims]
            ev.urls.append(url)
            ev.annotations[url] = human
            other = CREDIBLE if human == NON_CREDIBLE else NON_CREDIBLE
            predictions[url] = human if agree else other
        evidence += claims
    return evidence, predictions


def write_evidence_csv(path, evidence):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("claim_id,truth,url,annotation\n")
        for ev in evidence:
            for u in ev.urls:
                fh.write(f"{ev.claim_id},{str(ev.truth).lower()},{u},{ev.annotations.get(u, '')}\n")


def write_predictions_csv(path, predictions):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("url,label\n")
        for u, label in sorted(predictions.items()):
            fh.write(f"{u},{label}\n")
