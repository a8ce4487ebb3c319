// Copyright 2026 The Watertight Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "watertight/extract.hpp"

#include <algorithm>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>

#include "watertight/errors.hpp"

namespace watertight {

namespace {

// Slot 4 * q + e names edge e of quad q, running from corner e to corner
// (e + 1) % 4. The same numbering names corner e of quad q.
constexpr std::uint32_t kNoSlot = 0xffffffffu;

std::uint32_t quad_of(std::uint32_t slot) { return slot / 4; }
std::uint32_t corner_of(std::uint32_t slot) { return slot % 4; }

std::pair<VertexId, VertexId> slot_edge(const QuadSurface& s, std::uint32_t slot) {
  const Quad& q = s.quads[quad_of(slot)];
  return {q[corner_of(slot)], q[(corner_of(slot) + 1) % 4]};
}

struct EdgeGroups {
  std::vector<std::uint32_t> begin;  // group -> offset into `slots`, size groups + 1
  std::vector<std::uint32_t> slots;  // edge slots ordered by group

  std::size_t count() const { return begin.size() - 1; }
  std::span<const std::uint32_t> group(std::size_t g) const {
    return {slots.data() + begin[g], slots.data() + begin[g + 1]};
  }
};

EdgeGroups group_edges(const QuadSurface& s) {
  std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed;
  keyed.reserve(s.quads.size() * 4);
  for (std::uint32_t slot = 0; slot < s.quads.size() * 4; ++slot) {
    auto [a, b] = slot_edge(s, slot);
    if (a > b) std::swap(a, b);
    keyed.emplace_back((std::uint64_t{a} << 32) | b, slot);
  }
  std::sort(keyed.begin(), keyed.end());

  EdgeGroups groups;
  groups.slots.reserve(keyed.size());
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    if (i == 0 || keyed[i].first != keyed[i - 1].first) {
      groups.begin.push_back(static_cast<std::uint32_t>(i));
    }
    groups.slots.push_back(keyed[i].second);
  }
  groups.begin.push_back(static_cast<std::uint32_t>(keyed.size()));
  return groups;
}

// Corner slots incident to each vertex.
struct Incidence {
  std::vector<std::uint32_t> begin;
  std::vector<std::uint32_t> corners;

  std::span<const std::uint32_t> at(VertexId v) const {
    return {corners.data() + begin[v], corners.data() + begin[v + 1]};
  }
};

Incidence build_incidence(const QuadSurface& s) {
  Incidence inc;
  inc.begin.assign(s.vertex_lattice.size() + 1, 0);
  for (const Quad& q : s.quads) {
    for (VertexId v : q) ++inc.begin[v + 1];
  }
  std::partial_sum(inc.begin.begin(), inc.begin.end(), inc.begin.begin());
  inc.corners.resize(inc.begin.back());
  std::vector<std::uint32_t> fill(inc.begin.begin(), inc.begin.end() - 1);
  for (std::uint32_t q = 0; q < s.quads.size(); ++q) {
    for (std::uint32_t c = 0; c < 4; ++c) inc.corners[fill[s.quads[q][c]]++] = 4 * q + c;
  }
  return inc;
}

// Labels each corner around one vertex with its fan (0, 1, ...) in order of
// first appearance. Two corners share a fan when their quads are paired
// across an edge incident to the vertex. Returns the fan count.
int label_fans(std::span<const std::uint32_t> corners, const std::vector<std::uint32_t>& partner,
               std::vector<int>& labels) {
  const std::size_t k = corners.size();
  std::vector<std::size_t> parent(k);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < k; ++i) {
    const std::uint32_t q = quad_of(corners[i]);
    const std::uint32_t c = corner_of(corners[i]);
    for (std::uint32_t e : {4 * q + c, 4 * q + (c + 3) % 4}) {
      const std::uint32_t p = partner[e];
      if (p == kNoSlot) throw MalformedSurfaceError("open quad fan: edge without a partner");
      const std::uint32_t pq = quad_of(p);
      std::size_t j = 0;
      while (j < k && quad_of(corners[j]) != pq) ++j;
      if (j == k) throw MalformedSurfaceError("paired quad does not share the vertex");
      parent[find(i)] = find(j);
    }
  }
  labels.assign(k, -1);
  std::vector<int> root_label(k, -1);
  int fans = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t r = find(i);
    if (root_label[r] < 0) root_label[r] = fans++;
    labels[i] = root_label[r];
  }
  return fans;
}

// Gives every fan after the first its own copy of vertex v.
void apply_fan_split(QuadSurface& s, VertexId v, std::span<const std::uint32_t> corners,
                     const std::vector<int>& labels, int fans) {
  std::vector<VertexId> copy(static_cast<std::size_t>(fans), v);
  for (int f = 1; f < fans; ++f) {
    copy[static_cast<std::size_t>(f)] = static_cast<VertexId>(s.vertex_lattice.size());
    s.vertex_lattice.push_back(s.vertex_lattice[v]);
  }
  for (std::size_t i = 0; i < corners.size(); ++i) {
    s.quads[quad_of(corners[i])][corner_of(corners[i])] = copy[static_cast<std::size_t>(labels[i])];
  }
}

enum class Regroup { kByPositiveCell, kByOccupiedCell };

// Pairs the four slots of a non-manifold edge by the cell each quad borders.
void pair_four(const QuadSurface& s, std::span<const std::uint32_t> slots, Regroup mode,
               std::vector<std::uint32_t>& partner) {
  auto key = [&](std::uint32_t slot) {
    const QuadOrigin& o = s.origins[quad_of(slot)];
    return mode == Regroup::kByPositiveCell ? o.positive_cell() : o.cell_coord;
  };
  std::array<bool, 4> used{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (used[i]) continue;
    std::size_t j = i + 1;
    while (j < 4 && (used[j] || key(slots[j]) != key(slots[i]))) ++j;
    if (j == 4) throw MalformedSurfaceError("four-quad edge does not split into two pairs");
    used[i] = used[j] = true;
    partner[slots[i]] = slots[j];
    partner[slots[j]] = slots[i];
  }
}

}  // namespace

QuadSurface extract_boundary_faces(const Octree& tree, const SignField& signs,
                                   const ConnectionGraph& graph) {
  QuadSurface s;
  s.root_half_extent = tree.root_half_extent();
  s.leaf_size = tree.leaf_size();

  std::unordered_map<std::uint64_t, VertexId> vertex_index;
  auto vertex_at = [&](const CellCoord& corner) {
    const auto [it, inserted] =
        vertex_index.emplace(pack_coord(corner), static_cast<VertexId>(s.vertex_lattice.size()));
    if (inserted) s.vertex_lattice.push_back(corner);
    return it->second;
  };

  const auto& leaves = tree.occupied_leaves();
  for (std::size_t ordinal = 0; ordinal < leaves.size(); ++ordinal) {
    const NodeId leaf = leaves[ordinal];
    const CellCoord& cell = tree.node(leaf).coord;
    for (Direction d : kAllDirections) {
      const NodeId across = graph.neighbor(static_cast<std::int32_t>(ordinal), d);
      if (across == kNoNode) {
        if (tree.in_bounds(tree.max_depth(), step(cell, d))) {
          throw MalformedSurfaceError("occupied leaf is missing an interior connection");
        }
      } else if (signs.sign(across) != CellSign::kPositive) {
        continue;
      }

      const int a = axis_of(d);
      const int u = (a + 1) % 3;
      const int w = (a + 2) % 3;
      CellCoord base = cell;
      if (is_positive(d)) base[a] += 1;
      CellCoord pu = base;
      pu[u] += 1;
      CellCoord pw = base;
      pw[w] += 1;
      CellCoord puw = pu;
      puw[w] += 1;
      // e_u x e_w = e_a, so (base, +u, +u+w, +w) faces +a.
      const Quad quad = is_positive(d)
                            ? Quad{vertex_at(base), vertex_at(pu), vertex_at(puw), vertex_at(pw)}
                            : Quad{vertex_at(base), vertex_at(pw), vertex_at(puw), vertex_at(pu)};
      s.quads.push_back(quad);
      s.origins.push_back({leaf, cell, d});
    }
  }
  return s;
}

SplitResult split_nonmanifold_edges(QuadSurface surface) {
  QuadSurface& s = surface;
  const EdgeGroups groups = group_edges(s);
  std::vector<std::uint32_t> partner(s.quads.size() * 4, kNoSlot);
  std::vector<std::size_t> ambiguous;
  for (std::size_t g = 0; g < groups.count(); ++g) {
    const auto slots = groups.group(g);
    if (slots.size() == 2) {
      partner[slots[0]] = slots[1];
      partner[slots[1]] = slots[0];
    } else if (slots.size() == 4) {
      ambiguous.push_back(g);
    } else {
      throw MalformedSurfaceError("lattice edge with " + std::to_string(slots.size()) + " quads");
    }
  }
  if (ambiguous.empty()) return {std::move(surface), {}};

  std::vector<Regroup> mode(ambiguous.size(), Regroup::kByPositiveCell);
  for (std::size_t i = 0; i < ambiguous.size(); ++i) {
    pair_four(s, groups.group(ambiguous[i]), mode[i], partner);
  }

  const Incidence inc = build_incidence(s);
  std::vector<int> labels;
  // Do the two quad pairs of an ambiguous edge land in one fan at v?
  auto joined_at = [&](std::span<const std::uint32_t> slots, VertexId v) {
    const auto corners = inc.at(v);
    label_fans(corners, partner, labels);
    auto label_of_quad = [&](std::uint32_t q) {
      for (std::size_t i = 0; i < corners.size(); ++i) {
        if (quad_of(corners[i]) == q) return labels[i];
      }
      return -1;
    };
    const std::uint32_t first = slots[0];
    std::uint32_t other = kNoSlot;
    for (std::uint32_t slot : slots) {
      if (slot != first && slot != partner[first]) {
        other = slot;
        break;
      }
    }
    return label_of_quad(quad_of(first)) == label_of_quad(quad_of(other));
  };
  auto stuck = [&](std::size_t i) {
    const auto slots = groups.group(ambiguous[i]);
    const auto [a, b] = slot_edge(s, slots[0]);
    return joined_at(slots, a) && joined_at(slots, b);
  };

  // Switching one edge's pairing only changes fans at its two endpoints, so
  // sweep until no edge is stuck with both pairs in a single fan at both ends.
  constexpr int kMaxSweeps = 64;
  bool settled = false;
  for (int sweep = 0; sweep < kMaxSweeps && !settled; ++sweep) {
    settled = true;
    for (std::size_t i = 0; i < ambiguous.size(); ++i) {
      if (!stuck(i)) continue;
      mode[i] = mode[i] == Regroup::kByPositiveCell ? Regroup::kByOccupiedCell
                                                    : Regroup::kByPositiveCell;
      pair_four(s, groups.group(ambiguous[i]), mode[i], partner);
      settled = false;
    }
  }
  for (std::size_t i = 0; i < ambiguous.size(); ++i) {
    if (stuck(i)) throw MalformedSurfaceError("non-manifold edge could not be separated");
  }

  std::vector<VertexId> endpoints;
  for (std::size_t g : ambiguous) {
    const auto [a, b] = slot_edge(s, groups.group(g)[0]);
    endpoints.push_back(a);
    endpoints.push_back(b);
  }
  std::sort(endpoints.begin(), endpoints.end());
  endpoints.erase(std::unique(endpoints.begin(), endpoints.end()), endpoints.end());

  // Label everything before rewriting any quad: labels refer to slots.
  std::vector<std::vector<int>> all_labels(endpoints.size());
  std::vector<int> fan_counts(endpoints.size());
  for (std::size_t i = 0; i < endpoints.size(); ++i) {
    fan_counts[i] = label_fans(inc.at(endpoints[i]), partner, all_labels[i]);
  }
  for (std::size_t i = 0; i < endpoints.size(); ++i) {
    apply_fan_split(s, endpoints[i], inc.at(endpoints[i]), all_labels[i], fan_counts[i]);
  }

  SplitReport report;
  report.edge_splits = ambiguous.size();
  return {std::move(surface), report};
}

SplitResult split_nonmanifold_vertices(QuadSurface surface) {
  QuadSurface& s = surface;
  const EdgeGroups groups = group_edges(s);
  std::vector<std::uint32_t> partner(s.quads.size() * 4, kNoSlot);
  for (std::size_t g = 0; g < groups.count(); ++g) {
    const auto slots = groups.group(g);
    if (slots.size() != 2) {
      throw MalformedSurfaceError("edge with " + std::to_string(slots.size()) +
                                  " quads before vertex splitting");
    }
    partner[slots[0]] = slots[1];
    partner[slots[1]] = slots[0];
  }

  const Incidence inc = build_incidence(s);
  const auto vertex_count = static_cast<VertexId>(s.vertex_lattice.size());
  std::vector<int> labels;
  SplitReport report;
  for (VertexId v = 0; v < vertex_count; ++v) {
    const auto corners = inc.at(v);
    if (corners.empty()) continue;
    const int fans = label_fans(corners, partner, labels);
    if (fans > 1) {
      apply_fan_split(s, v, corners, labels, fans);
      ++report.vertex_splits;
    }
  }
  return {std::move(surface), report};
}

TriangleMesh triangulate(const QuadSurface& surface) {
  TriangleMesh mesh;
  mesh.vertices.reserve(surface.vertex_lattice.size());
  for (VertexId v = 0; v < surface.vertex_lattice.size(); ++v) {
    mesh.vertices.push_back(surface.position(v));
  }
  mesh.triangles.reserve(surface.quads.size() * 2);
  for (const Quad& q : surface.quads) {
    mesh.triangles.push_back({q[0], q[1], q[2]});
    mesh.triangles.push_back({q[0], q[2], q[3]});
  }
  return mesh;
}

}  // namespace watertight
