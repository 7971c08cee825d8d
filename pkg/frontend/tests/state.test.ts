import assert from "node:assert/strict";
import { test } from "node:test";

import {
  decodeState,
  emptyState,
  encodeState,
  statesEqual,
  withFilter,
  withPage,
  withTextQuery,
  withoutFilter,
} from "../src/state.js";

test("empty state encodes to empty string", () => {
  assert.equal(encodeState(emptyState()), "");
});

test("encode/decode round trip", () => {
  const state = withPage(
    withTextQuery(withFilter(withFilter(emptyState(), "Language", "spa"), "Type", "Corpus"), "tree bank"),
    1
  );
  const decoded = decodeState(encodeState(state));
  assert.ok(statesEqual(state, decoded));
  assert.equal(decoded.activeFilters.Language, "spa");
  assert.equal(decoded.textQuery, "tree bank");
});

test("url round trip: encode(decode(url)) == url for reachable states", () => {
  // every reachable state is produced by the transition helpers
  let state = emptyState();
  const urls: string[] = [];
  state = withFilter(state, "Language", "spa");
  urls.push(encodeState(state));
  state = withFilter(state, "Rights", "GPL v3 / später");
  urls.push(encodeState(state));
  state = withTextQuery(state, "universal declaration");
  urls.push(encodeState(state));
  state = withPage(state, 3);
  urls.push(encodeState(state));
  state = withoutFilter(state, "Language");
  urls.push(encodeState(state));
  for (const url of urls) {
    assert.equal(encodeState(decodeState(url)), url);
  }
});

test("special characters survive the round trip", () => {
  const state = withFilter(withTextQuery(emptyState(), "a&b=c?d #e"), "Creator", "Müller, J. & Co");
  const again = decodeState(encodeState(state));
  assert.equal(again.textQuery, "a&b=c?d #e");
  assert.equal(again.activeFilters.Creator, "Müller, J. & Co");
});

test("facet click resets page", () => {
  const paged = withPage(withTextQuery(emptyState(), "x"), 4);
  assert.equal(withFilter(paged, "Language", "deu").page, 1);
  assert.equal(withoutFilter(paged, "Language").page, 1);
});

test("unknown params are ignored", () => {
  const state = decodeState("?color=red&q=hi&page=2");
  assert.equal(state.textQuery, "hi");
  assert.equal(state.page, 2);
  assert.deepEqual(state.activeFilters, {});
});
