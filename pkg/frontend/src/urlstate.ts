// Shareable explorations: the current query serialized into the URL fragment.

import { QueryDoc } from "./types.js";

export function encodeFragment(query: QueryDoc): string {
  return "#q=" + encodeURIComponent(JSON.stringify(query));
}

export function decodeFragment(fragment: string): QueryDoc | null {
  const match = /^#q=(.+)$/.exec(fragment);
  if (!match) return null;
  try {
    const doc = JSON.parse(decodeURIComponent(match[1]));
    if (doc && typeof doc === "object" && "dataset" in doc) return doc as QueryDoc;
  } catch {
    // fall through: a mangled fragment is just ignored
  }
  return null;
}
