/** Small shared form controls. */

export function option(text: string, value: string): HTMLOptionElement {
  const element = document.createElement("option");
  element.textContent = text;
  element.value = value;
  return element;
}

export function subcorpusPicker(name: string): HTMLSelectElement {
  const select = document.createElement("select");
  select.name = name;
  select.append(option("(whole corpus)", ""));
  return select;
}
