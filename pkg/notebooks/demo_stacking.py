"""
Stacking tag probabilities onto lexical features
================================================

Half of this corpus carries its label in the text, half in the leading
tags. Lexical features alone can only resolve the first half. Appending
out-of-fold class probabilities from a tag-window classifier fixes that.
"""

import tempfile

from webcred.evaluate import Dataset, cross_validate, cross_validate_stacked
from webcred.features import FeatureResources
from webcred.html2seq import build_vocab, count_matrix
from webcred.learn import LearnerSpec
from webcred.pipeline import extract_store
from webcred.synthetic import build_store, complementary_corpus

pages = complementary_corpus(200, seed=0)
ratings = {p.url: p.rating for p in pages}
store = build_store(tempfile.mkdtemp(), pages)
ext = extract_store(store, FeatureResources.bundled())
ds = Dataset(ext.X, [ratings[u] for u in ext.urls], tuple(ext.urls), ext.schema)

vocab = build_vocab(ext.tag_streams)
tags = count_matrix(ext.tag_streams, vocab, 25)
spec = LearnerSpec("gradient_boosting")

lexical = cross_validate(ds, "two_class", spec, percentile=25)
stacked = cross_validate_stacked(ds, tags, "two_class", spec, percentile=25, tag_spec=LearnerSpec("nb"))

print("lexical only\n" + lexical.report.to_table())
print("stacked\n" + stacked.report.to_table())
print(stacked.protocol)
