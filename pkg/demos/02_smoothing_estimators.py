"""Compare the three bigram estimators on a tiny hand-checkable corpus.

Shows why plain MLE breaks on unseen bigrams, how interpolation patches
it with unigram mass, and how Modified Kneser-Ney redistributes exactly
the discounted mass over continuation probabilities.

Run:  python3 demos/02_smoothing_estimators.py
"""

from geoperc.lmcore import (
    EstimatorConfig,
    continuation_prob,
    count_ngrams,
    estimate_discounts,
    interpolated_bigram,
    mkn_bigram,
    mle_bigram,
)

docs = [
    ["i", "love", "driving"],
    ["i", "hate", "driving"],
    ["i", "love", "cooking"],
    ["we", "love", "driving"],
]
counts = count_ngrams(docs)
disc = estimate_discounts(counts)

print("corpus:", [" ".join(d) for d in docs])
print(f"unigrams: {counts.unigram}")
print(f"bigram types: {counts.continuation_total}, discounts: "
      f"d1={disc.d1:.3f} d2={disc.d2:.3f} d3={disc.d3:.3f}\n")

pairs = [("love", "driving"), ("hate", "driving"), ("love", "swimming")]
cfg_int = EstimatorConfig(mode="interpolated", lambda1=0.5)
cfg_mkn = EstimatorConfig(mode="mkn_normalizing")
cfg_lit = EstimatorConfig(mode="mkn_paper_literal")

print(f"{'bigram':>18} {'MLE':>8} {'interp':>8} {'MKN':>8} {'MKN-lit':>8}")
for prev, cur in pairs:
    print(
        f"{prev + ' ' + cur:>18}"
        f" {mle_bigram(counts, prev, cur):8.4f}"
        f" {interpolated_bigram(counts, prev, cur, cfg_int):8.4f}"
        f" {mkn_bigram(counts, disc, prev, cur, cfg_mkn):8.4f}"
        f" {mkn_bigram(counts, disc, prev, cur, cfg_lit):8.4f}"
    )

vocab = set(counts.unigram)
print("\nconditional mass after 'love' (should be 1.0 for MLE/interp/MKN):")
for name, f in (
    ("MLE", lambda w: mle_bigram(counts, "love", w)),
    ("interp", lambda w: interpolated_bigram(counts, "love", w, cfg_int)),
    ("MKN", lambda w: mkn_bigram(counts, disc, "love", w, cfg_mkn)),
    ("MKN-lit", lambda w: mkn_bigram(counts, disc, "love", w, cfg_lit)),
):
    print(f"  {name:>8}: {sum(f(w) for w in vocab):.12f}")

print("\ncontinuation distribution (fraction of bigram types each word completes):")
for w in sorted(vocab):
    print(f"  P_c({w}) = {continuation_prob(counts, w):.4f}")
