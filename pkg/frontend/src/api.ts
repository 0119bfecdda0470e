import type { Diagnostic, DocumentData, MutationCommand, RegistryInfo } from "./types.js";

export interface FetchedDocument {
  document: DocumentData;
  revision: number;
  parseError?: string;
}

export type MutationResult =
  | { ok: true; revision: number; ids: string[] }
  | { ok: false; conflict: true; revision: number; document: DocumentData }
  | { ok: false; conflict: false; message: string };

export class ApiClient {
  constructor(readonly baseUrl: string = "") {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  eventsUrl(name: string): string {
    return this.url(`/api/docs/${name}/events`);
  }

  async listDocuments(): Promise<Array<{ name: string; revision: number | null }>> {
    const response = await fetch(this.url("/api/docs"));
    if (!response.ok) throw new Error(`list failed: ${response.status}`);
    return response.json();
  }

  async getDocument(name: string): Promise<FetchedDocument> {
    const response = await fetch(this.url(`/api/docs/${name}`));
    if (!response.ok) throw new Error(`get failed: ${response.status}`);
    const document = (await response.json()) as DocumentData;
    return {
      document,
      revision: Number(response.headers.get("x-blueprint-revision") ?? document.revision),
      parseError: response.headers.get("x-blueprint-parse-error") ?? undefined,
    };
  }

  async mutate(name: string, baseRevision: number, commands: MutationCommand[]): Promise<MutationResult> {
    const response = await fetch(this.url(`/api/docs/${name}/mutations`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ base_revision: baseRevision, commands }),
    });
    if (response.status === 409) {
      const body = await response.json();
      return { ok: false, conflict: true, revision: body.revision, document: body.document };
    }
    if (!response.ok) {
      let message = `mutation failed: ${response.status}`;
      try {
        const body = await response.json();
        if (body && typeof body.message === "string") message = body.message;
      } catch {
        // keep the generic message
      }
      return { ok: false, conflict: false, message };
    }
    const body = await response.json();
    return {
      ok: true,
      revision: body.revision,
      ids: (body.results ?? []).map((r: { id: string }) => r.id),
    };
  }

  async lint(name: string): Promise<Diagnostic[]> {
    const response = await fetch(this.url(`/api/docs/${name}/lint`));
    if (!response.ok) throw new Error(`lint failed: ${response.status}`);
    return response.json();
  }

  async registry(name: string): Promise<RegistryInfo> {
    const response = await fetch(this.url(`/api/docs/${name}/registry`));
    if (!response.ok) throw new Error(`registry failed: ${response.status}`);
    return response.json();
  }
}
