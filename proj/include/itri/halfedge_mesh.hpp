#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace itri {

// Thrown on malformed input connectivity or corrupted mesh state. Carries the
// offending simplex so callers can report it.
class MeshError : public std::runtime_error {
 public:
  MeshError(std::string what, std::string simplex_kind = "", int simplex_id = -1)
      : std::runtime_error(std::move(what)),
        simplex_kind(std::move(simplex_kind)),
        simplex_id(simplex_id) {}
  std::string simplex_kind;
  int simplex_id;
};

struct MeshValidation {
  bool ok = true;
  std::string message;  // first failure, empty when ok
};

struct CompactionMaps {
  // old id -> new id, -1 for deleted elements
  std::vector<int> vertex, halfedge, edge, face;
};

// Halfedge mesh for oriented manifold triangle Δ-complexes. Self-glued edges
// and repeated vertices within a face are allowed; interior faces are always
// triangles. Exterior halfedges exist along boundary loops and carry
// face() == kBoundary so `next` cycles are defined everywhere. Element ids are
// stable under mutation; deleted ids are tombstoned until compact().
class HalfedgeMesh {
 public:
  static constexpr int kInvalid = -1;
  static constexpr int kBoundary = -2;  // face marker on exterior halfedges

  HalfedgeMesh() = default;

  // Builds from counterclockwise vertex-id triples. Directed edges pair a->b
  // with b->a; unpaired ones become boundary. Throws MeshError on inconsistent
  // orientation, non-manifold edges or vertices, isolated vertices, or
  // gluings a face list cannot express (e.g. a repeated directed edge).
  static HalfedgeMesh from_faces(int n_vertices, const std::vector<std::array<int, 3>>& faces);

  // -- counts ---------------------------------------------------------------
  int n_vertices() const { return n_live_vertices_; }
  int n_edges() const { return n_live_edges_; }
  int n_faces() const { return n_live_faces_; }
  int n_interior_halfedges() const;
  int vertex_capacity() const { return static_cast<int>(v_halfedge_.size()); }
  int edge_capacity() const { return static_cast<int>(e_halfedge_.size()); }
  int face_capacity() const { return static_cast<int>(f_halfedge_.size()); }
  int halfedge_capacity() const { return static_cast<int>(he_.size()); }
  int euler_characteristic() const { return n_vertices() - n_edges() + n_faces(); }
  int n_boundary_loops() const;

  bool vertex_alive(int v) const { return v >= 0 && v < vertex_capacity() && !v_dead_[v]; }
  bool edge_alive(int e) const { return e >= 0 && e < edge_capacity() && !e_dead_[e]; }
  bool face_alive(int f) const { return f >= 0 && f < face_capacity() && !f_dead_[f]; }
  bool halfedge_alive(int h) const { return h >= 0 && h < halfedge_capacity() && !he_dead_[h]; }

  // -- navigation -----------------------------------------------------------
  int twin(int h) const { return he_[h].twin; }
  int next(int h) const { return he_[h].next; }
  int prev(int h) const;  // O(1) on interior halfedges, walks the loop on exterior ones
  int tail(int h) const { return he_[h].vertex; }
  int head(int h) const { return he_[he_[h].twin].vertex; }
  int edge(int h) const { return he_[h].edge; }
  int face(int h) const { return he_[h].face; }
  bool interior(int h) const { return he_[h].face != kBoundary; }

  int halfedge_of_vertex(int v) const { return v_halfedge_[v]; }
  int halfedge_of_edge(int e) const { return e_halfedge_[e]; }
  int halfedge_of_face(int f) const { return f_halfedge_[f]; }

  // Vertex not on h within face(h); requires interior(h).
  int opposite_vertex(int h) const { return head(next(h)); }

  // Clockwise rotation about tail(h) (faces are counterclockwise).
  int next_outgoing_cw(int h) const { return he_[he_[h].twin].next; }

  // All outgoing halfedges of v in counterclockwise order, starting from
  // halfedge_of_vertex(v). Includes the exterior halfedge at boundary vertices.
  std::vector<int> outgoing_halfedges_ccw(int v) const;

  // Incident edge count; self-edges contribute two. Equals the outgoing
  // halfedge count.
  int degree(int v) const;

  bool is_boundary_edge(int e) const;
  bool is_boundary_vertex(int v) const;

  std::array<int, 3> face_halfedges(int f) const;
  std::array<int, 3> face_vertices(int f) const;
  // index of interior halfedge h within face_halfedges(face(h))
  int face_slot(int h) const;

  // -- mutation (connectivity only) -----------------------------------------

  // Flips the interior edge of halfedge h0: i->j with face (i,j,k) left of h0
  // and (j,i,l) on the twin side. After the call h0 runs l->k and its twin
  // k->l; faces and the edge keep their ids. Caller guarantees flippability.
  void flip_edge_raw(int h0);

  struct FaceSplit {
    int new_vertex;
    // Halfedges p->i, p->j, p->k where (i,j,k) = face corners in the order of
    // the halfedge passed in.
    int he_pi, he_pj, he_pk;
  };
  // Splits face(h0) with a new interior vertex p. h0: i->j keeps its id and
  // face; faces (j,k,p) and (k,i,p) are new.
  FaceSplit split_face_raw(int h0);

  struct EdgeSplit {
    int new_vertex;
    int he_ip;      // = the h0 passed in, now i->p
    int he_pj;      // continuation toward j, same direction as old h0
    int he_pk;      // p->k on the face(h0) side
    int he_pl;      // p->l on the twin side, kInvalid for boundary edges
  };
  // Splits the edge under h0: i->j at a new vertex p. Works for boundary
  // edges (twin side exterior); exterior chain is re-linked and the new
  // exterior halfedge b->p inherits nothing (caller fixes attributes).
  EdgeSplit split_edge_raw(int h0);

  struct VertexRemoval {
    int kept_face;
    std::array<int, 3> dead_edges;
    int new_boundary_edge = kInvalid;  // boundary removal: edge that became boundary
  };
  // Deletes an interior vertex of degree 3, merging its three faces into the
  // face of next(outgoing). Requires distinct incident faces/edges and no
  // self-edge at v.
  VertexRemoval remove_degree3_interior_raw(int v);
  // Deletes a boundary vertex of degree 2 (single incident face); the face's
  // third edge becomes boundary.
  VertexRemoval remove_degree2_boundary_raw(int v);

  // Drops tombstoned elements, renumbering live ones in id order.
  CompactionMaps compact();

  // Structural self-check: twin involution, 3-cycles on interior faces,
  // finite boundary loops, single vertex orbits, consistent back-pointers.
  MeshValidation validate() const;

 private:
  struct HalfedgeRecord {
    int twin = kInvalid;
    int next = kInvalid;
    int vertex = kInvalid;  // tail
    int edge = kInvalid;
    int face = kInvalid;    // kBoundary on exterior halfedges
  };

  std::vector<HalfedgeRecord> he_;
  std::vector<int> v_halfedge_, e_halfedge_, f_halfedge_;
  std::vector<uint8_t> he_dead_, v_dead_, e_dead_, f_dead_;
  int n_live_vertices_ = 0, n_live_edges_ = 0, n_live_faces_ = 0;

  int new_vertex();
  int new_edge();
  int new_face();
  int new_halfedge();
  void kill_vertex(int v);
  void kill_edge(int e);
  void kill_face(int f);
  void kill_halfedge(int h);
  // Repoints v_halfedge_[tail(h)] away from h before h dies.
  void release_vertex_pointer(int h);
};

}  // namespace itri
