import { describe, expect, test } from "vitest";

import { markdownToHtml } from "../src/markdown.js";

describe("markdown rendering", () => {
  test("paragraphs, emphasis, and inline code", () => {
    const html = markdownToHtml("plain **bold** and *soft* with `code()`");
    expect(html).toContain("<strong>bold</strong>");
    expect(html).toContain("<em>soft</em>");
    expect(html).toContain("<code>code()</code>");
  });

  test("headings and lists", () => {
    const html = markdownToHtml("## Section\n\n- first\n- second");
    expect(html).toContain("<h2>Section</h2>");
    expect(html).toContain("<li>first</li>");
    expect(html).toContain("<li>second</li>");
  });

  test("html in bodies is escaped, not executed", () => {
    const html = markdownToHtml('<script>alert("x")</script> and <b>b</b>');
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
    expect(html).not.toContain("<b>b</b>");
  });

  test("inline and block math render through katex", () => {
    const html = markdownToHtml("energy $E = mc^2$ and\n\n$$\\sum_{i} x_i$$");
    expect(html).toContain("katex");
    expect(html.match(/katex/g)!.length).toBeGreaterThanOrEqual(2);
    expect(html).toContain("katex-display"); // block form
  });

  test("markup inside code spans stays literal", () => {
    const html = markdownToHtml("`**not bold**`");
    expect(html).toContain("**not bold**");
    expect(html).not.toContain("<strong>");
  });

  test("links only for safe schemes", () => {
    const ok = markdownToHtml("[docs](https://example.org/x)");
    expect(ok).toContain('href="https://example.org/x"');
    const bad = markdownToHtml("[x](javascript:alert(1))");
    expect(bad).not.toContain("href=");
  });
});
