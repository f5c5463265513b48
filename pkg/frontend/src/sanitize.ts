// Post bodies arrive as HTML written on other servers; keep only inert markup.

const ALLOWED_TAGS = new Set([
  "P", "BR", "SPAN", "A", "EM", "STRONG", "B", "I", "U", "S",
  "CODE", "PRE", "BLOCKQUOTE", "UL", "OL", "LI", "DEL",
])

const ALLOWED_ATTRS = new Set(["href", "title", "class"])

export function sanitizeHtml(doc: Document, markup: string): DocumentFragment {
  const template = doc.createElement("template")
  template.innerHTML = markup
  scrub(template.content)
  return template.content
}

function scrub(node: ParentNode): void {
  for (const child of Array.from(node.children)) {
    if (!ALLOWED_TAGS.has(child.tagName)) {
      // Unwrap unknown containers, drop active content outright.
      if (child.tagName === "SCRIPT" || child.tagName === "STYLE" || child.tagName === "IFRAME") {
        child.remove()
        continue
      }
      const parent = child.parentNode!
      while (child.firstChild) parent.insertBefore(child.firstChild, child)
      child.remove()
      continue
    }
    for (const attr of Array.from(child.attributes)) {
      const name = attr.name.toLowerCase()
      if (!ALLOWED_ATTRS.has(name) || name.startsWith("on")) {
        child.removeAttribute(attr.name)
        continue
      }
      if (name === "href" && /^\s*javascript:/i.test(attr.value)) {
        child.removeAttribute(attr.name)
      }
    }
    if (child.tagName === "A") {
      child.setAttribute("rel", "noopener noreferrer")
      child.setAttribute("target", "_blank")
    }
    scrub(child)
  }
}
