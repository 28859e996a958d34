// Taxonomy browser model: category-first drill-down (category ->
// subcategory -> requirement) with free-text search as a shortcut.

import type { Requirement, Taxonomy } from "./types";

export interface SubcategoryNode {
  id: string;
  requirements: Requirement[];
}

export interface CategoryNode {
  id: string;
  requirements: Requirement[]; // direct members (no subcategory)
  subcategories: SubcategoryNode[];
  total: number; // distinct requirements anywhere under the category
}

function idOrder(a: Requirement, b: Requirement): number {
  const na = parseInt(a.id.replace(/\D/g, ""), 10) || 0;
  const nb = parseInt(b.id.replace(/\D/g, ""), 10) || 0;
  return na - nb || a.id.localeCompare(b.id);
}

export function buildTree(taxonomy: Taxonomy): CategoryNode[] {
  return taxonomy.categories.map((category) => {
    const direct: Requirement[] = [];
    const bySub = new Map<string, Requirement[]>(category.subcategories.map((s) => [s, []]));
    const seen = new Set<string>();
    for (const requirement of taxonomy.requirements) {
      for (const membership of requirement.categories) {
        const [cat, sub] = membership.split("/");
        if (cat !== category.id) continue;
        seen.add(requirement.id);
        if (sub) {
          bySub.get(sub)?.push(requirement);
        } else {
          direct.push(requirement);
        }
      }
    }
    direct.sort(idOrder);
    const subcategories = category.subcategories.map((id) => ({
      id,
      requirements: (bySub.get(id) ?? []).sort(idOrder),
    }));
    return { id: category.id, requirements: direct, subcategories, total: seen.size };
  });
}

/** Case-insensitive match over requirement ids and text. */
export function searchRequirements(taxonomy: Taxonomy, query: string): Requirement[] {
  const needle = query.trim().toLowerCase();
  if (!needle) return [];
  return taxonomy.requirements
    .filter((r) => r.id.toLowerCase() === needle || r.text.toLowerCase().includes(needle))
    .sort(idOrder);
}
