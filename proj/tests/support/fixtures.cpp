#include "fixtures.hpp"

#include <cmath>
#include <numbers>

namespace fixture {

using namespace foldnet;

std::filesystem::path data_dir() { return FOLDNET_DATA_DIR; }

TriMesh corpus(const std::string& name) { return load_obj(data_dir() / (name + ".obj")); }

std::vector<Vec2> rect(double x0, double y0, double x1, double y1) {
  return {{x0, y0}, {x0, y1}, {x1, y1}, {x1, y0}};
}

NetBuilder::NetBuilder(std::vector<Vec2> root_loop) {
  NetFace f;
  f.loop = std::move(root_loop);
  faces_.push_back(std::move(f));
}

int NetBuilder::add(int parent, std::vector<Vec2> loop, Vec2 a, Vec2 b, double target_deg, int id) {
  NetFace f;
  f.loop = std::move(loop);
  faces_.push_back(std::move(f));
  Crease c;
  c.id = id;
  c.parent_face = parent;
  c.child_face = static_cast<int>(faces_.size()) - 1;
  c.hinge = {a, b};
  c.target = target_deg * std::numbers::pi / 180.0;
  c.trivial = std::abs(target_deg) < 1e-12;
  creases_.push_back(c);
  return c.child_face;
}

Net NetBuilder::build() const {
  auto same = [](const Segment2& s, const Vec2& p, const Vec2& q) {
    return ((s.a - p).norm() < 1e-9 && (s.b - q).norm() < 1e-9) || ((s.a - q).norm() < 1e-9 && (s.b - p).norm() < 1e-9);
  };
  std::vector<Cut> cuts;
  for (int f = 0; f < static_cast<int>(faces_.size()); ++f) {
    const auto& loop = faces_[f].loop;
    for (size_t i = 0; i < loop.size(); ++i) {
      const Vec2& p = loop[i];
      const Vec2& q = loop[(i + 1) % loop.size()];
      bool hinge = false;
      for (const auto& c : creases_)
        if ((c.parent_face == f || c.child_face == f) && same(c.hinge, p, q)) hinge = true;
      if (!hinge) cuts.push_back({{p, q}, f});
    }
  }
  return Net(0, faces_, creases_, cuts, Provenance{"fixture", 0, 0, false});
}

Net one_crease(double target_deg) {
  NetBuilder b(rect(0, 0, 10, 10));
  b.add(0, rect(10, 0, 20, 10), {10, 0}, {10, 10}, target_deg, 0);
  return b.build();
}

Net occlusion() {
  NetBuilder b(rect(0, 0, 10, 10));
  b.add(0, rect(0, 10, 10, 22), {0, 10}, {10, 10}, 170.0, 0);
  b.add(0, rect(0, -10, 10, 0), {0, 0}, {10, 0}, 30.0, 1);
  return b.build();
}

Net blocking() {
  NetBuilder b(rect(0, 0, 10, 10));
  int p = b.add(0, rect(10, 0, 20, 10), {10, 0}, {10, 10}, 50.0, 0);
  b.add(p, rect(20, 0, 30, 10), {20, 0}, {20, 10}, 120.0, 1);
  b.add(0, rect(-10, 0, 0, 10), {0, 0}, {0, 10}, 90.0, 2);
  return b.build();
}

Net visibility_wall(double len) {
  NetBuilder b(rect(0, 0, 10, 10));
  int p = b.add(0, rect(0, 10, 10, 20), {0, 10}, {10, 10}, 90.0, 0);
  b.add(p, rect(0, 20, 10, 20 + len), {0, 20}, {10, 20}, 90.0, 1);
  return b.build();
}

Net flat_flap() {
  NetBuilder b(rect(0, 0, 10, 10));
  b.add(0, rect(10, 0, 20, 15), {10, 0}, {10, 10}, 180.0, 0);
  b.add(0, rect(0, 10, 10, 20), {0, 10}, {10, 10}, 90.0, 1);
  return b.build();
}

Net open_box() {
  NetBuilder b(rect(0, 0, 10, 10));
  int s = b.add(0, rect(10, 0, 20, 10), {10, 0}, {10, 10}, 0.0, 0);
  b.add(0, rect(-5, 0, 0, 10), {0, 0}, {0, 10}, 90.0, 1);
  b.add(0, rect(0, 10, 10, 15), {0, 10}, {10, 10}, 90.0, 2);
  b.add(0, rect(0, -5, 10, 0), {0, 0}, {10, 0}, 90.0, 3);
  b.add(s, rect(20, 0, 25, 10), {20, 0}, {20, 10}, 90.0, 4);
  b.add(s, rect(10, 10, 20, 15), {10, 10}, {20, 10}, 90.0, 5);
  b.add(s, rect(10, -5, 20, 0), {10, 0}, {20, 0}, 90.0, 6);
  return b.build();
}

Net wing_through_wall() {
  NetBuilder b(rect(0, 0, 10, 10));
  b.add(0, rect(0, -5, 10, 0), {0, 0}, {10, 0}, 90.0, 0);
  b.add(0, {{0, 10}, {0, 22}, {14, 22}, {14, 10}}, {0, 10}, {10, 10}, 150.0, 1);
  b.add(0, rect(10, 0, 15, 10), {10, 0}, {10, 10}, 90.0, 2);
  return b.build();
}

Net chain(int n, double target_deg) {
  NetBuilder b(rect(0, 0, 10, 10));
  for (int i = 1; i < n; ++i)
    b.add(i - 1, rect(10.0 * i, 0, 10.0 * (i + 1), 10), {10.0 * i, 0}, {10.0 * i, 10}, target_deg, i - 1);
  return b.build();
}

TriMesh l_tray() {
  const std::vector<Vec2> outline = {{0, 0}, {20, 0}, {20, 10}, {10, 10}, {10, 20}, {0, 20}};
  std::vector<Vec3> v;
  for (const auto& p : outline) v.push_back({p.x(), p.y(), 0.0});
  for (const auto& p : outline) v.push_back({p.x(), p.y(), 5.0});
  std::vector<std::vector<int>> f = {{3, 2, 1, 0}, {5, 4, 3, 0}};
  for (int i = 0; i < 6; ++i) {
    int j = (i + 1) % 6;
    f.push_back({i, j, j + 6, i + 6});
  }
  return TriMesh::from_polygons(std::move(v), std::move(f));
}

}  // namespace fixture
