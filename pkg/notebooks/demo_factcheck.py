"""
Credibility in a fact-checking pipeline
=======================================

Evidence URLs for true and false claims carry a human credibility label.
The impact report counts how often the model agrees, separately for each
claim truth value. The counts below are the published ones.
"""

from webcred.corpus import CREDIBLE, NON_CREDIBLE, ClaimEvidence, factcheck_report

counts = {"true": (5, 57, 39, 40, 31), "false": (5, 48, 32, 34, 24)}

evidence, predictions = [], {}
for truth, (n_claims, non, cred, ok_non, ok_cred) in counts.items():
    claims = [ClaimEvidence(f"{truth}-{i}", truth == "true") for i in range(n_claims)]
    labelled = [(NON_CREDIBLE, j < ok_non) for j in range(non)] + [(CREDIBLE, j < ok_cred) for j in range(cred)]
    for k, (human, agree) in enumerate(labelled):
        url = f"https://{truth}{k:03d}.example/"
        claims[k % n_claims].urls.append(url)
        claims[k % n_claims].annotations[url] = human
        predictions[url] = human if agree else (CREDIBLE if human == NON_CREDIBLE else NON_CREDIBLE)
    evidence += claims

print(factcheck_report(evidence, predictions).to_table())

###############################################################################
# 40 of 57 is 0.70, so the non-credible fraction for true claims comes out
# at 0.70. The other three fractions match the published ones.
