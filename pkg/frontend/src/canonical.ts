/** Canonical layout serialization, byte-identical to the engine's files.
 *
 * The engine writes layout documents with sorted keys, two-space indent and
 * a trailing newline, printing floats in shortest round-trip form with a
 * ".0" suffix on integral values ("0.0", not "0"). Matching those bytes here
 * makes an exported file equal to what the service/CLI would write for the
 * same layout.
 */

// keys whose values the engine types as floats (printed "0.0", never "0");
// covers layout documents and the scene export
const FLOAT_KEYS = new Set(["length", "width", "height", "orientation", "yaw", "vertical_fov"]);
const FLOAT_ARRAYS = new Set(["center", "size", "position", "look_at", "up", "fit_scale"]);

function formatFloat(v: number): string {
  if (Number.isInteger(v)) {
    return `${v.toFixed(1)}`;
  }
  return String(v);
}

function serialize(value: unknown, indent: string, floatContext: boolean): string {
  if (typeof value === "number") {
    return floatContext ? formatFloat(value) : String(value);
  }
  if (typeof value === "string") {
    return JSON.stringify(value);
  }
  if (typeof value === "boolean" || value === null) {
    return JSON.stringify(value);
  }
  const next = indent + "  ";
  if (Array.isArray(value)) {
    if (value.length === 0) {
      return "[]";
    }
    const items = value.map((v) => next + serialize(v, next, floatContext));
    return `[\n${items.join(",\n")}\n${indent}]`;
  }
  const obj = value as Record<string, unknown>;
  const keys = Object.keys(obj).sort();
  if (keys.length === 0) {
    return "{}";
  }
  const items = keys.map((key) => {
    const child = serialize(
      obj[key],
      next,
      FLOAT_KEYS.has(key) || FLOAT_ARRAYS.has(key),
    );
    return `${next}${JSON.stringify(key)}: ${child}`;
  });
  return `{\n${items.join(",\n")}\n${indent}}`;
}

export function canonicalLayoutJson(doc: unknown): string {
  return serialize(doc, "", false) + "\n";
}
