import { describe, expect, it } from "vitest";

import { ApiError } from "../src/api";
import { serviceClient } from "./helpers";

describe("api client against the live service", () => {
  it("lists the fixture corpus with its token count", async () => {
    const corpora = await serviceClient().listCorpora();
    expect(corpora).toHaveLength(1);
    expect(corpora[0]).toMatchObject({ name: "MINI", tokens: 7 });
  });

  it("returns one line per occurrence for a literal query", async () => {
    const response = await serviceClient().query("MINI", { q: '"isso"' });
    expect(response.matches_total).toBe(4);
    expect(response.truncated).toBe(false);
    expect(response.lines.map((line) => line.focus)).toEqual([
      ["isso"], ["isso"], ["isso"], ["isso"],
    ]);
  });

  it("reports syntax errors with a position", async () => {
    const failure = serviceClient().query("MINI", { q: '["' });
    await expect(failure).rejects.toBeInstanceOf(ApiError);
    await expect(failure).rejects.toMatchObject({ status: 400, code: "bad_query" });
    try {
      await serviceClient().query("MINI", { q: '["' });
    } catch (error) {
      expect((error as ApiError).position).toBeTypeOf("number");
    }
  });

  it("maps unknown corpora to 404", async () => {
    await expect(serviceClient().query("NOPE", { q: '"x"' })).rejects.toMatchObject({
      status: 404,
    });
  });

  it("serves frequency rows from the index", async () => {
    const response = await serviceClient().frequency("MINI", "word");
    expect(response.scope_size).toBe(7);
    expect(response.rows[0]).toEqual(["isso", 4]);
  });

  it("computes a distribution by text metadata", async () => {
    const response = await serviceClient().distribution("MINI", {
      q: '"isso"',
      key: "century",
    });
    expect(response).toEqual({ categories: { "16": 3, "17": 1 }, total: 4 });
  });

  it("manages subcorpora", async () => {
    const client = serviceClient();
    const created = await client.createSubcorpus("MINI", {
      name: "api-test",
      where: { century: "17" },
    });
    expect(created).toMatchObject({ name: "api-test", size: 2 });
    const listed = await client.listSubcorpora("MINI");
    expect(listed.map((s) => s.name)).toContain("api-test");
    await client.deleteSubcorpus("MINI", "api-test");
    const after = await client.listSubcorpora("MINI");
    expect(after.map((s) => s.name)).not.toContain("api-test");
  });

  it("rejects duplicate subcorpus names", async () => {
    const client = serviceClient();
    await expect(
      client.createSubcorpus("MINI", { name: "cent16", where: { century: "16" } }),
    ).rejects.toMatchObject({ status: 409 });
  });
});
