import { ApiClient } from "./api.js";
import { CanvasApp } from "./app.js";

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) return;
  const api = new ApiClient("");
  const requested = new URLSearchParams(window.location.search).get("doc");
  if (requested) {
    await new CanvasApp(root, api, requested).start();
    return;
  }
  const docs = await api.listDocuments().catch(() => []);
  if (docs.length === 1) {
    await new CanvasApp(root, api, docs[0].name).start();
    return;
  }
  root.innerHTML = '<div class="doc-picker"><h1>Blueprints in this workspace</h1></div>';
  const picker = root.querySelector(".doc-picker")!;
  if (docs.length === 0) {
    const hint = document.createElement("p");
    hint.textContent = "No documents yet. Create one with: blueprint init <name>";
    picker.appendChild(hint);
    return;
  }
  for (const doc of docs) {
    const link = document.createElement("a");
    link.href = `/?doc=${encodeURIComponent(doc.name)}`;
    link.textContent = `${doc.name} (rev ${doc.revision ?? "broken"})`;
    picker.appendChild(link);
  }
}

void boot();
