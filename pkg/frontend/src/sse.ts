// Server-sent events over fetch + ReadableStream, so the same client
// runs in browsers and in the node/jsdom test environment (which has no
// EventSource). Reconnects with backoff until stopped.

export interface SseEvent {
  event: string;
  data: string;
}

export class SseParser {
  private buffer = "";
  private eventName = "";
  private dataLines: string[] = [];

  push(chunk: string): SseEvent[] {
    this.buffer += chunk;
    const events: SseEvent[] = [];
    let index: number;
    while ((index = this.buffer.indexOf("\n")) >= 0) {
      const line = this.buffer.slice(0, index).replace(/\r$/, "");
      this.buffer = this.buffer.slice(index + 1);
      if (line === "") {
        if (this.dataLines.length > 0 || this.eventName !== "") {
          events.push({ event: this.eventName || "message", data: this.dataLines.join("\n") });
        }
        this.eventName = "";
        this.dataLines = [];
      } else if (line.startsWith("event:")) {
        this.eventName = line.slice(6).trimStart();
      } else if (line.startsWith("data:")) {
        this.dataLines.push(line.slice(5).trimStart());
      }
      // comments and other fields are ignored
    }
    return events;
  }
}

export interface StreamHandlers {
  onEvent: (event: SseEvent) => void;
  onConnectionChange?: (connected: boolean) => void;
}

export class EventStreamClient {
  private stopped = false;
  private controller: AbortController | null = null;

  constructor(
    private readonly url: string,
    private readonly handlers: StreamHandlers,
    private readonly retryDelayMs = 1000,
  ) {}

  start(): void {
    void this.loop();
  }

  stop(): void {
    this.stopped = true;
    this.controller?.abort();
  }

  private async loop(): Promise<void> {
    while (!this.stopped) {
      this.controller = new AbortController();
      try {
        const response = await fetch(this.url, {
          headers: { Accept: "text/event-stream" },
          signal: this.controller.signal,
        });
        if (!response.ok || response.body === null) {
          throw new Error(`subscribe failed: ${response.status}`);
        }
        this.handlers.onConnectionChange?.(true);
        const reader = response.body.getReader();
        const decoder = new TextDecoder();
        const parser = new SseParser();
        for (;;) {
          const { done, value } = await reader.read();
          if (done) break;
          for (const event of parser.push(decoder.decode(value, { stream: true }))) {
            this.handlers.onEvent(event);
          }
        }
      } catch {
        // fall through to the retry path
      }
      if (this.stopped) return;
      this.handlers.onConnectionChange?.(false);
      await new Promise((resolve) => setTimeout(resolve, this.retryDelayMs));
    }
  }
}
