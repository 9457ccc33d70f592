"""
Scoring predictions: per-technique F1 and the pooled micro average
===================================================================

Runs the full file-based pipeline through the command-line entry points —
featurize, train, predict, evaluate — inside a temp directory, then reads
the report back.  Everything here can also be done in-process with the
library API (see the other walkthroughs); the CLI exists so each stage
can be cached, diffed, and rerun independently.
"""

import tempfile
from pathlib import Path

from proplab.cli import main
from proplab.synthetic import build_synthetic_corpus, write_corpus_files

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    corpus = build_synthetic_corpus(n_per_class=12, seed=0)
    articles_dir, labels_path, lexicon_path = write_corpus_files(corpus, tmp)

    # Stage 1: corpus -> feature cache (hashed embeddings + emotion scores).
    features = tmp / "features.tsv"
    main([
        "featurize",
        "--articles", str(articles_dir),
        "--labels", str(labels_path),
        "--emotion-lexicon", str(lexicon_path),
        "--out", str(features),
    ])

    # Stage 2: feature cache -> checkpoint (config file sets the optimizer).
    config = tmp / "run.ini"
    config.write_text("[model]\nmax_epochs = 12\nlearning_rate = 0.001\n",
                      encoding="utf-8")
    checkpoint = tmp / "model.ckpt"
    main([
        "train",
        "--config", str(config),
        "--features", str(features),
        "--checkpoint", str(checkpoint),
        "--out", str(tmp / "train-log.tsv"),
    ])

    # Stage 3: checkpoint + features -> one predicted technique per segment.
    predictions = tmp / "predictions.tsv"
    main([
        "predict",
        "--features", str(features),
        "--checkpoint", str(checkpoint),
        "--out", str(predictions),
    ])
    print("first prediction rows:")
    for line in predictions.read_text(encoding="utf-8").splitlines()[:3]:
        print(" ", line)
    print()

    # Stage 4: predictions vs gold labels -> the report itself.  One row
    # per technique (precision, recall, F1, support) plus the micro
    # average, which for single-label data is exactly the accuracy.
    main([
        "evaluate",
        "--predictions", str(predictions),
        "--labels", str(labels_path),
    ])
