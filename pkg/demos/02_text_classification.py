# Naive Bayes over bug-report text: kind, severity, and story-point sizing.
#
# Run: python demos/02_text_classification.py

from swphm import classify_nb, tokenize, train_nb
from swphm.weighting import estimate_story_point

print("tokenizer: lowercase, split on non-alphanumerics, drop 1-char tokens")
print(" ", tokenize("Crash when saving: NullPointerException in v5.0!"))

kind_corpus = [
    ("crash on login page", "fault"),
    ("timeout fetching attachments", "fault"),
    ("error 500 when posting comment", "fault"),
    ("memory leak in worker process", "fault"),
    ("add dark mode theme", "enhancement"),
    ("support markdown in comments", "enhancement"),
    ("request bulk export option", "enhancement"),
    ("improve keyboard navigation", "enhancement"),
]
model = train_nb([(tokenize(t), label) for t, label in kind_corpus], alpha=1.0)
print(f"\nkind classifier: classes={model.classes}, |V|={len(model.vocabulary)}")

for text in ("crash during export", "please add an option to export boards", "zzz unseen words"):
    result = classify_nb(model, tokenize(text))
    flag = "  [no in-vocabulary evidence -> prior argmax]" if result.no_evidence else ""
    top = max(result.posteriors.values())
    print(f"  {text!r} -> {result.label} (p={top:.3f}){flag}")

# sizing: the same machinery with Fibonacci size classes as labels
sizing_corpus = [
    ("fix typo in tooltip", "1"),
    ("adjust button padding", "1"),
    ("rename settings field", "2"),
    ("new validation rule on form", "3"),
    ("rework permissions check", "5"),
    ("migrate storage backend rewrite schema", "8"),
    ("full rewrite of rendering engine", "8"),
    ("redesign caching and invalidation layers", "5"),
]
sizing = train_nb([(tokenize(t), label) for t, label in sizing_corpus], alpha=1.0)
print("\nstory-point estimates:")
for text in ("rewrite the schema migration", "typo in a label"):
    sp = estimate_story_point(tokenize(text), sizing)
    print(f"  {text!r} -> {sp} points")
