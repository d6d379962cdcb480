/**
 * Minimal virtual-node layer.
 *
 * Views are pure functions from state to VNode trees, so tests can assert
 * on rendered output as plain data with no DOM; the browser entry point
 * converts trees to real elements with `toDom`.
 */

export interface VNode {
  tag: string;
  attrs: Record<string, string>;
  children: (VNode | string)[];
  on?: Record<string, (event: Event) => void>;
}

export function h(
  tag: string,
  attrs: Record<string, string> = {},
  children: (VNode | string)[] = [],
  on?: Record<string, (event: Event) => void>,
): VNode {
  return { tag, attrs, children, on };
}

/** All text content of a tree, depth first. */
export function textOf(node: VNode | string): string {
  if (typeof node === "string") return node;
  return node.children.map(textOf).join(" ");
}

/** Depth-first search for nodes matching a predicate. */
export function findAll(node: VNode | string, match: (n: VNode) => boolean): VNode[] {
  if (typeof node === "string") return [];
  const here = match(node) ? [node] : [];
  return here.concat(node.children.flatMap((child) => findAll(child, match)));
}

export function findByClass(node: VNode, className: string): VNode[] {
  return findAll(node, (n) => (n.attrs.class ?? "").split(" ").includes(className));
}

export function toDom(node: VNode | string, doc: Document = document): Node {
  if (typeof node === "string") return doc.createTextNode(node);
  const element = doc.createElement(node.tag);
  for (const [key, value] of Object.entries(node.attrs)) {
    element.setAttribute(key, value);
  }
  if (node.on) {
    for (const [event, handler] of Object.entries(node.on)) {
      element.addEventListener(event, handler);
    }
  }
  for (const child of node.children) {
    element.appendChild(toDom(child, doc));
  }
  return element;
}

/** Replace `container`'s content with the rendered tree. */
export function mount(container: Element, node: VNode): void {
  container.replaceChildren(toDom(node, container.ownerDocument));
}
