import { describe, expect, test } from "vitest";

import { SseParser } from "../src/sse.js";

describe("SSE parsing", () => {
  test("one named event", () => {
    const parser = new SseParser();
    const events = parser.push('event: changed\ndata: {"revision": 3}\n\n');
    expect(events).toEqual([{ event: "changed", data: '{"revision": 3}' }]);
  });

  test("events split across arbitrary chunk boundaries", () => {
    const parser = new SseParser();
    const whole = 'event: snapshot\ndata: {"a": 1}\n\nevent: heartbeat\ndata: {}\n\n';
    const events = [];
    for (let i = 0; i < whole.length; i += 3) {
      events.push(...parser.push(whole.slice(i, i + 3)));
    }
    expect(events.map((e) => e.event)).toEqual(["snapshot", "heartbeat"]);
    expect(JSON.parse(events[0].data)).toEqual({ a: 1 });
  });

  test("multi-line data is joined", () => {
    const parser = new SseParser();
    const events = parser.push("event: x\ndata: one\ndata: two\n\n");
    expect(events[0].data).toBe("one\ntwo");
  });

  test("crlf line endings are tolerated", () => {
    const parser = new SseParser();
    const events = parser.push("event: y\r\ndata: {}\r\n\r\n");
    expect(events).toEqual([{ event: "y", data: "{}" }]);
  });
});
