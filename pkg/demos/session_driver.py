"""Scripted walk through the interactive refinement loop.

Simulates what the browser UI does: create a session, look at the
layout, pick a reference object, box a dozen candidates, mark the four
that share the reference's class, submit, and re-embed. Runs the HTTP
app in-process, so no server needs to be up.

Run from the repo root:  python3 demos/session_driver.py
"""

import time

import numpy as np
from fastapi.testclient import TestClient

from ktembed import FeatureMatrix, LabelVector, euclidean_kernel
from ktembed.service import Dataset, create_app

rng = np.random.default_rng(1)
centers = rng.normal(size=(5, 6)) * 8
pts = np.concatenate([c + rng.normal(size=(24, 6)) for c in centers])
labels = np.repeat(np.arange(5), 24)
feats = FeatureMatrix([f"img{i}" for i in range(120)], pts)
kernel = euclidean_kernel(feats)

app = create_app({"default": Dataset("default", kernel, LabelVector(labels))})
client = TestClient(app)

state = client.post("/sessions", json={"config": {"perplexity": 15}}).json()
sid = state["id"]
print(f"session {sid}: revision {state['revision']}, {len(state['ids'])} points")

# the "expert": reference img0, shown a mixed dozen, marks the same-class ones
shown = [f"img{i}" for i in [1, 2, 3, 30, 31, 55, 56, 80, 81, 100, 101, 5]]
same_class = [s for s in shown if labels[int(s[3:])] == labels[0]]
resp = client.post(f"/sessions/{sid}/selections", json={
    "ref": "img0", "selected": same_class, "shown": shown}).json()
print(f"marked {len(same_class)} of {len(shown)}: "
      f"{resp['added']} constraints added, {resp['tripletCount']} total")

resp = client.post(f"/sessions/{sid}/reembed", json={"config": {"iters": 400}})
print(f"re-embed accepted: {resp.json()}")

while True:
    state = client.get(f"/sessions/{sid}").json()
    if state["status"] != "embedding":
        break
    print(f"  still embedding, serving revision {state['revision']}")
    time.sleep(0.2)
print(f"done: revision {state['revision']}, status {state['status']}")

export = client.get(f"/sessions/{sid}/export").json()
print(f"export: {len(export['triplets_csv'].splitlines()) - 1} triplets, "
      f"{len(export['embedding_csv'].splitlines()) - 1} coordinates")
