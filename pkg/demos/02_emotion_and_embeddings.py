"""
Emotional salience scores and hashed sentence embeddings
=========================================================

Shows the two feature families that feed the classifier: a five-dimension
emotion profile (valence, joy, anger, fear, sadness) looked up from a
lexicon and averaged over matched tokens, and a fixed-width hashed
bag-of-ngrams embedding that stands in when no pretrained encoder output
is available.
"""

import numpy as np

from proplab.categories import CategoryLexicon, category_features
from proplab.corpus import extract_segments
from proplab.embeddings import HashEmbeddingProvider, hash_embed
from proplab.emotion import EMOTION_DIMENSIONS, LexiconEmotionProvider
from proplab.features import CONDITIONS, build_bundles
from proplab.synthetic import build_synthetic_corpus

corpus = build_synthetic_corpus(n_per_class=4, seed=0)
segments = extract_segments(corpus.articles, corpus.annotations)

# --- emotion scores ------------------------------------------------------
# Each lexicon row maps a token to five intensities in [0, 1]; a segment's
# profile is the per-dimension mean over the tokens the lexicon knows.
emotion = LexiconEmotionProvider(corpus.emotion_lexicon())
profile = emotion.get_scores(segments[0])
print("emotion dimensions:", ", ".join(EMOTION_DIMENSIONS))
print("segment", segments[0].key, "->",
      [f"{v:.3f}" for v in profile.as_tuple()])

# --- hashed embeddings ---------------------------------------------------
# Tokens and adjacent bigrams are hashed into a 1024-bucket histogram that
# is then L2-normalized, so identical wording always lands on the same
# unit vector.
vec = hash_embed(("make", "it", "so"), dim=1024)
print()
print(f"hash_embed dim:  {vec.shape[0]}")
print(f"unit norm:       {np.linalg.norm(vec):.6f}")
print(f"deterministic:   {np.array_equal(vec, hash_embed(('make', 'it', 'so'), dim=1024))}")

# --- category fractions (optional third block) ---------------------------
# LIWC-style dictionaries add per-category token fractions; exact entries
# and prefix wildcards both count, each token at most once per category.
lexicon = CategoryLexicon(
    categories=["negate", "certain"],
    exact_entries={"no": frozenset({0}), "never": frozenset({0, 1})},
    prefix_entries={"alway": frozenset({1})},
)
fractions = category_features(("no", "retreat", "always", "forward"), lexicon)
print()
print(f"category fractions over {lexicon.categories}: {np.round(fractions, 3)}")

# --- fusion conditions ---------------------------------------------------
# A condition names which blocks are concatenated into the model input.
# Bundles carry the blocks separately so the net can route the auxiliary
# part through its own hidden layer.
print()
print("available conditions:", ", ".join(sorted(CONDITIONS)))
bundles, schema = build_bundles(
    segments,
    "embed+emotion",
    embed_provider=HashEmbeddingProvider(),
    emotion_provider=emotion,
)
b = bundles[0]
print(f"embedding block {b.embedding.shape}, emotion block {b.emotion.shape},"
      f" category block {b.category.shape}  (condition {schema.condition!r})")
