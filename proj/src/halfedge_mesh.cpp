#include "itri/halfedge_mesh.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>

namespace itri {

namespace {
std::string simplex_str(const char* kind, int id) {
  return std::string(kind) + " " + std::to_string(id);
}
}  // namespace

HalfedgeMesh HalfedgeMesh::from_faces(int n_vertices,
                                      const std::vector<std::array<int, 3>>& faces) {
  if (n_vertices < 0) throw MeshError("negative vertex count");
  HalfedgeMesh m;
  const int nf = static_cast<int>(faces.size());
  m.he_.resize(3 * nf);
  m.he_dead_.assign(3 * nf, 0);
  m.v_halfedge_.assign(n_vertices, kInvalid);
  m.v_dead_.assign(n_vertices, 0);
  m.f_halfedge_.assign(nf, kInvalid);
  m.f_dead_.assign(nf, 0);
  m.n_live_vertices_ = n_vertices;
  m.n_live_faces_ = nf;

  for (int f = 0; f < nf; ++f) {
    for (int s = 0; s < 3; ++s) {
      const int v = faces[f][s];
      if (v < 0 || v >= n_vertices)
        throw MeshError("face references vertex out of range: " + simplex_str("face", f),
                        "face", f);
      const int h = 3 * f + s;
      m.he_[h].vertex = v;
      m.he_[h].next = 3 * f + (s + 1) % 3;
      m.he_[h].face = f;
      if (m.v_halfedge_[v] == kInvalid) m.v_halfedge_[v] = h;
    }
    m.f_halfedge_[f] = 3 * f;
  }
  for (int v = 0; v < n_vertices; ++v)
    if (m.v_halfedge_[v] == kInvalid)
      throw MeshError("isolated vertex: " + simplex_str("vertex", v), "vertex", v);

  // Twin pairing on directed edges: a->b glues to b->a, and the two halfedges
  // of a self-glued loop edge a->a glue to each other.
  std::map<std::pair<int, int>, std::vector<int>> directed;
  for (int h = 0; h < 3 * nf; ++h)
    directed[{m.tail(h), m.he_[m.he_[h].next].vertex}].push_back(h);

  auto head_of = [&](int h) { return m.he_[m.he_[h].next].vertex; };
  std::vector<int> unpaired;
  for (auto& [key, hs] : directed) {
    const auto [a, b] = key;
    if (a == b) {
      if (hs.size() > 2)
        throw MeshError("ambiguous gluing: loop edge at vertex " + std::to_string(a) +
                            " appears " + std::to_string(hs.size()) + " times",
                        "vertex", a);
      if (hs.size() == 2) {
        m.he_[hs[0]].twin = hs[1];
        m.he_[hs[1]].twin = hs[0];
      } else {
        unpaired.push_back(hs[0]);
      }
      continue;
    }
    if (hs.size() > 1) {
      auto rev = directed.find({b, a});
      const size_t total = hs.size() + (rev == directed.end() ? 0 : rev->second.size());
      if (total > 2)
        throw MeshError("non-manifold edge between vertices " + std::to_string(a) + " and " +
                            std::to_string(b),
                        "edge", kInvalid);
      throw MeshError("inconsistent orientation on edge between vertices " + std::to_string(a) +
                          " and " + std::to_string(b),
                      "edge", kInvalid);
    }
  }
  for (auto& [key, hs] : directed) {
    const auto [a, b] = key;
    if (a == b) continue;  // loops handled above
    auto rev = directed.find({b, a});
    if (rev == directed.end()) {
      unpaired.push_back(hs[0]);
    } else if (a < b) {  // pair each unordered edge once
      m.he_[hs[0]].twin = rev->second[0];
      m.he_[rev->second[0]].twin = hs[0];
    }
  }

  // Edges: one per twin pair, one per unpaired (boundary) halfedge.
  for (int h = 0; h < 3 * nf; ++h) {
    if (m.he_[h].edge != kInvalid) continue;
    const int e = m.new_edge();
    m.he_[h].edge = e;
    m.e_halfedge_[e] = h;
    if (m.he_[h].twin != kInvalid) m.he_[m.he_[h].twin].edge = e;
  }

  // Exterior halfedges for the boundary, then link each loop.
  std::vector<int> ext_at(n_vertices, kInvalid);
  for (int h : unpaired) {
    const int x = m.new_halfedge();
    m.he_[x].twin = h;
    m.he_[h].twin = x;
    m.he_[x].vertex = head_of(h);
    m.he_[x].edge = m.he_[h].edge;
    m.he_[x].face = kBoundary;
    const int t = m.he_[x].vertex;
    if (ext_at[t] != kInvalid)
      throw MeshError("non-manifold boundary vertex " + std::to_string(t), "vertex", t);
    ext_at[t] = x;
  }
  for (int h : unpaired) {
    const int x = m.he_[h].twin;
    const int to = m.tail(h);  // head of the exterior halfedge
    m.he_[x].next = ext_at[to];
  }

  // Every vertex star must be a single halfedge cycle; two fans glued at one
  // vertex pair up edge-by-edge but are still non-manifold.
  std::vector<int> out_count(n_vertices, 0);
  for (int h = 0; h < m.halfedge_capacity(); ++h) out_count[m.tail(h)]++;
  for (int v = 0; v < n_vertices; ++v) {
    int h = m.v_halfedge_[v], seen = 0;
    do {
      ++seen;
      if (seen > out_count[v]) break;
      h = m.next_outgoing_cw(h);
    } while (h != m.v_halfedge_[v]);
    if (seen != out_count[v])
      throw MeshError("non-manifold vertex " + std::to_string(v) +
                          " (star is not a single cycle)",
                      "vertex", v);
  }
  return m;
}

int HalfedgeMesh::n_interior_halfedges() const {
  int n = 0;
  for (int h = 0; h < halfedge_capacity(); ++h)
    if (!he_dead_[h] && interior(h)) ++n;
  return n;
}

int HalfedgeMesh::n_boundary_loops() const {
  std::vector<uint8_t> seen(he_.size(), 0);
  int loops = 0;
  for (int h = 0; h < halfedge_capacity(); ++h) {
    if (he_dead_[h] || interior(h) || seen[h]) continue;
    ++loops;
    int c = h;
    do {
      seen[c] = 1;
      c = next(c);
    } while (c != h);
  }
  return loops;
}

int HalfedgeMesh::prev(int h) const {
  if (interior(h)) return next(next(h));
  int c = h, guard = 0;
  while (next(c) != h) {
    c = next(c);
    if (++guard > halfedge_capacity()) throw MeshError("broken boundary loop", "halfedge", h);
  }
  return c;
}

std::vector<int> HalfedgeMesh::outgoing_halfedges_ccw(int v) const {
  std::vector<int> out;
  const int h0 = v_halfedge_[v];
  int h = h0;
  do {
    out.push_back(h);
    h = next_outgoing_cw(h);
    if (out.size() > he_.size()) throw MeshError("broken vertex star", "vertex", v);
  } while (h != h0);
  std::reverse(out.begin() + 1, out.end());  // cw orbit, reversed past the anchor, is ccw
  return out;
}

int HalfedgeMesh::degree(int v) const {
  int d = 0;
  const int h0 = v_halfedge_[v];
  int h = h0;
  do {
    ++d;
    h = next_outgoing_cw(h);
    if (d > static_cast<int>(he_.size())) throw MeshError("broken vertex star", "vertex", v);
  } while (h != h0);
  return d;
}

bool HalfedgeMesh::is_boundary_edge(int e) const {
  const int h = e_halfedge_[e];
  return !interior(h) || !interior(twin(h));
}

bool HalfedgeMesh::is_boundary_vertex(int v) const {
  const int h0 = v_halfedge_[v];
  int h = h0;
  do {
    if (!interior(h)) return true;
    h = next_outgoing_cw(h);
  } while (h != h0);
  return false;
}

std::array<int, 3> HalfedgeMesh::face_halfedges(int f) const {
  const int h = f_halfedge_[f];
  return {h, next(h), next(next(h))};
}

std::array<int, 3> HalfedgeMesh::face_vertices(int f) const {
  const auto hs = face_halfedges(f);
  return {tail(hs[0]), tail(hs[1]), tail(hs[2])};
}

int HalfedgeMesh::face_slot(int h) const {
  const auto hs = face_halfedges(face(h));
  for (int s = 0; s < 3; ++s)
    if (hs[s] == h) return s;
  throw MeshError("halfedge not listed in its own face", "halfedge", h);
}

// -- allocation helpers -------------------------------------------------------

int HalfedgeMesh::new_vertex() {
  v_halfedge_.push_back(kInvalid);
  v_dead_.push_back(0);
  ++n_live_vertices_;
  return static_cast<int>(v_halfedge_.size()) - 1;
}
int HalfedgeMesh::new_edge() {
  e_halfedge_.push_back(kInvalid);
  e_dead_.push_back(0);
  ++n_live_edges_;
  return static_cast<int>(e_halfedge_.size()) - 1;
}
int HalfedgeMesh::new_face() {
  f_halfedge_.push_back(kInvalid);
  f_dead_.push_back(0);
  ++n_live_faces_;
  return static_cast<int>(f_halfedge_.size()) - 1;
}
int HalfedgeMesh::new_halfedge() {
  he_.emplace_back();
  he_dead_.push_back(0);
  return static_cast<int>(he_.size()) - 1;
}
void HalfedgeMesh::kill_vertex(int v) {
  v_dead_[v] = 1;
  v_halfedge_[v] = kInvalid;
  --n_live_vertices_;
}
void HalfedgeMesh::kill_edge(int e) {
  e_dead_[e] = 1;
  e_halfedge_[e] = kInvalid;
  --n_live_edges_;
}
void HalfedgeMesh::kill_face(int f) {
  f_dead_[f] = 1;
  f_halfedge_[f] = kInvalid;
  --n_live_faces_;
}
void HalfedgeMesh::kill_halfedge(int h) { he_dead_[h] = 1; }

void HalfedgeMesh::release_vertex_pointer(int h) {
  const int v = tail(h);
  if (v_halfedge_[v] != h) return;
  int c = next_outgoing_cw(h);
  while (c != h) {
    if (!he_dead_[c]) {
      v_halfedge_[v] = c;
      return;
    }
    c = next_outgoing_cw(c);
  }
  v_halfedge_[v] = kInvalid;  // caller is deleting the vertex
}

// -- mutations ---------------------------------------------------------------

void HalfedgeMesh::flip_edge_raw(int h0) {
  const int h = h0, t = twin(h);
  if (!interior(h) || !interior(t)) throw MeshError("flip of boundary edge", "edge", edge(h));
  const int hn = next(h), hp = next(hn);
  const int tn = next(t), tp = next(tn);
  const int f0 = face(h), f1 = face(t);
  const int i = tail(h), j = tail(t), k = tail(hp), l = tail(tp);

  if (v_halfedge_[i] == h) v_halfedge_[i] = tn;
  if (v_halfedge_[j] == t) v_halfedge_[j] = hn;

  he_[h].vertex = l;
  he_[t].vertex = k;
  he_[h].next = hp;
  he_[hp].next = tn;
  he_[tn].next = h;
  he_[t].next = tp;
  he_[tp].next = hn;
  he_[hn].next = t;
  he_[tn].face = f0;
  he_[hn].face = f1;
  f_halfedge_[f0] = h;
  f_halfedge_[f1] = t;
}

HalfedgeMesh::FaceSplit HalfedgeMesh::split_face_raw(int h0) {
  if (!interior(h0)) throw MeshError("face split on exterior halfedge", "halfedge", h0);
  const int h1 = next(h0), h2 = next(h1);
  const int f = face(h0);
  const int i = tail(h0), j = tail(h1), k = tail(h2);

  const int p = new_vertex();
  const int e_pi = new_edge(), e_pj = new_edge(), e_pk = new_edge();
  const int f_jk = new_face(), f_ki = new_face();
  const int he_pi = new_halfedge(), he_ip = new_halfedge();
  const int he_pj = new_halfedge(), he_jp = new_halfedge();
  const int he_pk = new_halfedge(), he_kp = new_halfedge();

  auto set = [&](int h, int twin, int nxt, int v, int e, int fc) {
    he_[h] = {twin, nxt, v, e, fc};
  };
  // (i, j, p) keeps id f
  set(he_jp, he_pj, he_pi, j, e_pj, f);
  set(he_pi, he_ip, h0, p, e_pi, f);
  he_[h0].next = he_jp;
  // (j, k, p)
  set(he_kp, he_pk, he_pj, k, e_pk, f_jk);
  set(he_pj, he_jp, h1, p, e_pj, f_jk);
  he_[h1].next = he_kp;
  he_[h1].face = f_jk;
  // (k, i, p)
  set(he_ip, he_pi, he_pk, i, e_pi, f_ki);
  set(he_pk, he_kp, h2, p, e_pk, f_ki);
  he_[h2].next = he_ip;
  he_[h2].face = f_ki;

  v_halfedge_[p] = he_pi;
  e_halfedge_[e_pi] = he_pi;
  e_halfedge_[e_pj] = he_pj;
  e_halfedge_[e_pk] = he_pk;
  f_halfedge_[f] = h0;
  f_halfedge_[f_jk] = h1;
  f_halfedge_[f_ki] = h2;
  return {p, he_pi, he_pj, he_pk};
}

HalfedgeMesh::EdgeSplit HalfedgeMesh::split_edge_raw(int h0) {
  if (!interior(h0)) throw MeshError("edge split must be given the interior side", "halfedge", h0);
  const int h = h0, t = twin(h);
  const int hn = next(h), hp = next(hn);
  const int f0 = face(h);
  const int j = tail(t), k = tail(hp);
  const int e_old = edge(h);

  const int p = new_vertex();
  const int e2 = new_edge(), e_pk = new_edge();
  const int f_a = new_face();
  const int he_pj = new_halfedge(), he_jp = new_halfedge();
  const int he_pk = new_halfedge(), he_kp = new_halfedge();

  auto set = [&](int hh, int twin, int nxt, int v, int e, int fc) {
    he_[hh] = {twin, nxt, v, e, fc};
  };

  // near side: (i, p, k) keeps id f0; (p, j, k) is new
  set(he_pk, he_kp, hp, p, e_pk, f0);
  he_[h].next = he_pk;
  set(he_pj, he_jp, hn, p, e2, f_a);
  set(he_kp, he_pk, he_pj, k, e_pk, f_a);
  he_[hn].next = he_kp;
  he_[hn].face = f_a;
  f_halfedge_[f0] = h;
  f_halfedge_[f_a] = he_pj;

  int he_pl = kInvalid;
  if (interior(t)) {
    const int tn = next(t), tp = next(tn);
    const int f1 = face(t);
    const int l = tail(tp);
    const int e_pl = new_edge();
    const int f_b = new_face();
    const int he_plh = new_halfedge(), he_lp = new_halfedge();
    he_pl = he_plh;

    if (v_halfedge_[j] == t) v_halfedge_[j] = he_jp;
    he_[t].vertex = p;
    // (p, i, l) keeps id f1; (j, p, l) is new
    set(he_lp, he_pl, t, l, e_pl, f1);
    he_[tn].next = he_lp;
    set(he_jp, he_pj, he_pl, j, e2, f_b);
    set(he_plh, he_lp, tp, p, e_pl, f_b);
    he_[tp].next = he_jp;
    he_[tp].face = f_b;
    f_halfedge_[f1] = t;
    f_halfedge_[f_b] = he_jp;
    e_halfedge_[e_pl] = he_plh;
  } else {
    // boundary edge: splice j->p into the exterior loop before p->i
    const int loop_prev = prev(t);
    if (v_halfedge_[j] == t) v_halfedge_[j] = he_jp;
    he_[t].vertex = p;
    set(he_jp, he_pj, t, j, e2, kBoundary);
    he_[loop_prev].next = he_jp;
  }

  v_halfedge_[p] = he_pj;
  e_halfedge_[e_old] = h;
  e_halfedge_[e2] = he_pj;
  e_halfedge_[e_pk] = he_pk;
  return {p, h, he_pj, he_pk, he_pl};
}

HalfedgeMesh::VertexRemoval HalfedgeMesh::remove_degree3_interior_raw(int v) {
  const int o0 = v_halfedge_[v];
  const int o1 = next_outgoing_cw(o0);
  const int o2 = next_outgoing_cw(o1);
  if (next_outgoing_cw(o2) != o0 || o1 == o0 || o2 == o0 || o2 == o1)
    throw MeshError("vertex is not degree 3", "vertex", v);
  for (int o : {o0, o1, o2}) {
    if (!interior(o) || !interior(twin(o)))
      throw MeshError("degree-3 removal at boundary vertex", "vertex", v);
    if (head(o) == v) throw MeshError("removal across self-edge", "vertex", v);
  }
  const int g0 = face(twin(o0)), g1 = face(twin(o1)), g2 = face(twin(o2));
  if (g0 == g1 || g1 == g2 || g0 == g2)
    throw MeshError("removal with coincident faces", "vertex", v);
  const std::array<int, 3> dead_edges = {edge(o0), edge(o1), edge(o2)};
  if (dead_edges[0] == dead_edges[1] || dead_edges[1] == dead_edges[2] ||
      dead_edges[0] == dead_edges[2])
    throw MeshError("removal with coincident edges", "vertex", v);

  const int outer0 = next(o1);  // b->a in (a, v, b)
  const int outer1 = next(o2);  // c->b
  const int outer2 = next(o0);  // a->c
  const int a = tail(twin(o0)), b = tail(twin(o1)), c = tail(twin(o2));
  const int kept = g0;

  he_[outer2].next = outer1;
  he_[outer1].next = outer0;
  he_[outer0].next = outer2;
  he_[outer0].face = kept;
  he_[outer1].face = kept;
  he_[outer2].face = kept;
  f_halfedge_[kept] = outer0;

  if (v_halfedge_[a] == twin(o0)) v_halfedge_[a] = outer2;
  if (v_halfedge_[b] == twin(o1)) v_halfedge_[b] = outer0;
  if (v_halfedge_[c] == twin(o2)) v_halfedge_[c] = outer1;

  for (int o : {o0, o1, o2}) {
    kill_halfedge(twin(o));
    kill_halfedge(o);
  }
  for (int e : dead_edges) kill_edge(e);
  kill_face(g1);
  kill_face(g2);
  kill_vertex(v);
  return {kept, dead_edges, kInvalid};
}

HalfedgeMesh::VertexRemoval HalfedgeMesh::remove_degree2_boundary_raw(int v) {
  const int o0 = v_halfedge_[v];
  const int o1 = next_outgoing_cw(o0);
  if (next_outgoing_cw(o1) != o0 || o1 == o0)
    throw MeshError("vertex is not degree 2", "vertex", v);
  int in = interior(o0) ? o0 : o1;   // v->y inside the single face
  int ex = interior(o0) ? o1 : o0;   // v->x along the boundary
  if (interior(ex) || !interior(in))
    throw MeshError("degree-2 removal needs one interior and one exterior outgoing", "vertex", v);
  if (head(in) == v || head(ex) == v) throw MeshError("removal across self-edge", "vertex", v);

  const int f = face(in);
  const int m = next(in);       // y->x, survives and becomes boundary
  const int w = next(m);        // x->v
  if (twin(w) != ex || next(w) != in)
    throw MeshError("degree-2 boundary vertex has inconsistent star", "vertex", v);
  if (!interior(twin(m)))
    throw MeshError("removal would orphan an isolated face", "vertex", v);
  const int y = head(in), x = tail(w);
  const std::array<int, 3> dead_edges = {edge(in), edge(ex), kInvalid};

  const int t_in = twin(in);  // y->v, exterior
  const int loop_prev = prev(t_in);
  const int loop_next = next(ex);
  if (loop_prev == ex) {
    he_[m].next = m;  // two-halfedge boundary loop collapses onto m alone
  } else {
    he_[loop_prev].next = m;
    he_[m].next = loop_next;
  }
  he_[m].face = kBoundary;

  if (v_halfedge_[y] == t_in) v_halfedge_[y] = m;
  if (v_halfedge_[x] == w) v_halfedge_[x] = twin(m);
  e_halfedge_[edge(m)] = m;

  kill_halfedge(in);
  kill_halfedge(t_in);
  kill_halfedge(w);
  kill_halfedge(ex);
  kill_edge(dead_edges[0]);
  kill_edge(dead_edges[1]);
  kill_face(f);
  kill_vertex(v);
  return {kInvalid, dead_edges, edge(m)};
}

CompactionMaps HalfedgeMesh::compact() {
  CompactionMaps maps;
  auto build = [](const std::vector<uint8_t>& dead, std::vector<int>& map) {
    map.assign(dead.size(), kInvalid);
    int next_id = 0;
    for (size_t i = 0; i < dead.size(); ++i)
      if (!dead[i]) map[i] = next_id++;
    return next_id;
  };
  const int nv = build(v_dead_, maps.vertex);
  const int ne = build(e_dead_, maps.edge);
  const int nf = build(f_dead_, maps.face);
  const int nh = build(he_dead_, maps.halfedge);

  std::vector<HalfedgeRecord> he(nh);
  std::vector<int> vh(nv), eh(ne), fh(nf);
  for (int h = 0; h < halfedge_capacity(); ++h) {
    if (he_dead_[h]) continue;
    HalfedgeRecord r = he_[h];
    r.twin = maps.halfedge[r.twin];
    r.next = maps.halfedge[r.next];
    r.vertex = maps.vertex[r.vertex];
    r.edge = maps.edge[r.edge];
    if (r.face != kBoundary) r.face = maps.face[r.face];
    he[maps.halfedge[h]] = r;
  }
  for (int v = 0; v < vertex_capacity(); ++v)
    if (!v_dead_[v]) vh[maps.vertex[v]] = maps.halfedge[v_halfedge_[v]];
  for (int e = 0; e < edge_capacity(); ++e)
    if (!e_dead_[e]) eh[maps.edge[e]] = maps.halfedge[e_halfedge_[e]];
  for (int f = 0; f < face_capacity(); ++f)
    if (!f_dead_[f]) fh[maps.face[f]] = maps.halfedge[f_halfedge_[f]];

  he_ = std::move(he);
  v_halfedge_ = std::move(vh);
  e_halfedge_ = std::move(eh);
  f_halfedge_ = std::move(fh);
  he_dead_.assign(nh, 0);
  v_dead_.assign(nv, 0);
  e_dead_.assign(ne, 0);
  f_dead_.assign(nf, 0);
  return maps;
}

MeshValidation HalfedgeMesh::validate() const {
  auto fail = [](std::string msg) { return MeshValidation{false, std::move(msg)}; };

  for (int h = 0; h < halfedge_capacity(); ++h) {
    if (he_dead_[h]) continue;
    const auto& r = he_[h];
    if (!halfedge_alive(r.twin) || !halfedge_alive(r.next))
      return fail("halfedge " + std::to_string(h) + " references dead halfedge");
    if (r.twin == h) return fail("halfedge " + std::to_string(h) + " is its own twin");
    if (twin(r.twin) != h) return fail("twin not involutive at halfedge " + std::to_string(h));
    if (!vertex_alive(r.vertex)) return fail("halfedge " + std::to_string(h) + " has dead tail");
    if (!edge_alive(r.edge)) return fail("halfedge " + std::to_string(h) + " has dead edge");
    if (edge(r.twin) != r.edge) return fail("twin edge mismatch at halfedge " + std::to_string(h));
    if (tail(next(h)) != head(h))
      return fail("next/twin tail mismatch at halfedge " + std::to_string(h));
    if (r.face != kBoundary && !face_alive(r.face))
      return fail("halfedge " + std::to_string(h) + " has dead face");
  }

  // interior faces are 3-cycles; boundary loops are finite exterior cycles
  for (int h = 0; h < halfedge_capacity(); ++h) {
    if (he_dead_[h]) continue;
    if (interior(h)) {
      if (next(next(next(h))) != h)
        return fail("face cycle through halfedge " + std::to_string(h) + " is not length 3");
      if (face(next(h)) != face(h))
        return fail("face field inconsistent at halfedge " + std::to_string(h));
    } else {
      int c = h, steps = 0;
      do {
        if (interior(c))
          return fail("boundary loop through halfedge " + std::to_string(h) + " enters a face");
        c = next(c);
        if (++steps > halfedge_capacity()) return fail("unclosed boundary loop");
      } while (c != h);
    }
  }

  for (int f = 0; f < face_capacity(); ++f) {
    if (f_dead_[f]) continue;
    if (!halfedge_alive(f_halfedge_[f]) || face(f_halfedge_[f]) != f)
      return fail("face " + std::to_string(f) + " has bad canonical halfedge");
  }
  std::vector<int> per_edge(edge_capacity(), 0);
  for (int h = 0; h < halfedge_capacity(); ++h)
    if (!he_dead_[h]) per_edge[edge(h)]++;
  for (int e = 0; e < edge_capacity(); ++e) {
    if (e_dead_[e]) {
      if (per_edge[e] != 0) return fail("dead edge " + std::to_string(e) + " still referenced");
      continue;
    }
    if (per_edge[e] != 2) return fail("edge " + std::to_string(e) + " does not have 2 halfedges");
    if (!halfedge_alive(e_halfedge_[e]) || edge(e_halfedge_[e]) != e)
      return fail("edge " + std::to_string(e) + " has bad canonical halfedge");
  }

  std::vector<int> out_count(vertex_capacity(), 0);
  for (int h = 0; h < halfedge_capacity(); ++h)
    if (!he_dead_[h]) out_count[tail(h)]++;
  for (int v = 0; v < vertex_capacity(); ++v) {
    if (v_dead_[v]) {
      if (out_count[v] != 0) return fail("dead vertex " + std::to_string(v) + " still referenced");
      continue;
    }
    if (!halfedge_alive(v_halfedge_[v]) || tail(v_halfedge_[v]) != v)
      return fail("vertex " + std::to_string(v) + " has bad canonical halfedge");
    int h = v_halfedge_[v], seen = 0;
    do {
      ++seen;
      if (seen > out_count[v]) break;
      h = next_outgoing_cw(h);
    } while (h != v_halfedge_[v]);
    if (seen != out_count[v])
      return fail("vertex " + std::to_string(v) + " star is not a single cycle");
  }

  int live_v = 0, live_e = 0, live_f = 0;
  for (auto d : v_dead_) live_v += !d;
  for (auto d : e_dead_) live_e += !d;
  for (auto d : f_dead_) live_f += !d;
  if (live_v != n_live_vertices_ || live_e != n_live_edges_ || live_f != n_live_faces_)
    return fail("live element counters out of sync");
  return {};
}

}  // namespace itri
