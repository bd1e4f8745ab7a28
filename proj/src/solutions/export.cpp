#include "nyz/solutions.hpp"

#include <cmath>
#include <cstdio>

namespace nyz::sol {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double axis(double lo, double hi, int n, int i) {
  return n == 1 ? lo : lo + i * (hi - lo) / (n - 1);
}

nlohmann::json grid_json(const Grid& g) {
  return {{"z1", {g.z1_lo, g.z1_hi, g.n1}}, {"z2", {g.z2_lo, g.z2_hi, g.n2}}};
}

nlohmann::json grid_json(const Grid3& g) {
  return {{"t", {g.t_lo, g.t_hi, g.nt}},
          {"x", {g.x_lo, g.x_hi, g.nx}},
          {"y", {g.y_lo, g.y_hi, g.ny}}};
}

}  // namespace

ExportResult export_family_grid(const SolutionFamily& f,
                                const std::string& model_id, const Grid& g,
                                double tolerance, double step) {
  const jet::EquationModel& m = jet::model(model_id);
  const bool has_w = f.kind != "implicit-burgers";
  ExportResult out;
  out.csv = "z1,z2,h,w,residual\n";
  int singular_nodes = 0;
  for (int i = 0; i < g.n1; ++i) {
    const double z1 = axis(g.z1_lo, g.z1_hi, g.n1, i);
    for (int j = 0; j < g.n2; ++j) {
      const double z2 = axis(g.z2_lo, g.z2_hi, g.n2, j);
      try {
        const double h = eval_h(f, z1, z2);
        const double w = has_w ? eval_w(f, z1, z2) : 0.0;
        Grid node{z1, z1, 1, z2, z2, 1};
        const double r = residual_fd(f, model_id, node, step);
        out.max_residual = std::max(out.max_residual, r);
        out.csv += fmt(z1) + "," + fmt(z2) + "," + fmt(h) + "," +
                   (has_w ? fmt(w) : std::string()) + "," + fmt(r) + "\n";
      } catch (const std::domain_error&) {
        ++singular_nodes;
        out.csv += fmt(z1) + "," + fmt(z2) + ",singular,singular,singular\n";
      }
    }
  }
  out.manifest = {
      {"family", f.name},
      {"parameters",
       f.a ? nlohmann::json{{"a", sym::to_string(*f.a)}}
           : nlohmann::json::object()},
      {"model", m.id},
      {"grid", grid_json(g)},
      {"tolerance", tolerance},
      {"max_residual", out.max_residual},
      {"rows", g.n1 * g.n2},
      {"singular_nodes", singular_nodes},
  };
  return out;
}

ExportResult export_composite_grid(const CompositeSolution& c, const Grid3& g,
                                   double tolerance, double step) {
  ExportResult out;
  out.csv = "t,x,y,u,residual\n";
  int singular_nodes = 0;
  for (int i = 0; i < g.nt; ++i) {
    const double t = axis(g.t_lo, g.t_hi, g.nt, i);
    for (int j = 0; j < g.nx; ++j) {
      const double x = axis(g.x_lo, g.x_hi, g.nx, j);
      for (int k = 0; k < g.ny; ++k) {
        const double y = axis(g.y_lo, g.y_hi, g.ny, k);
        try {
          if (c.singular && c.singular(t, x, y)) throw std::domain_error("");
          const double u = c.u(t, x, y);
          const double r = std::abs(dn_residual_at(c.u, t, x, y, step));
          out.max_residual = std::max(out.max_residual, r);
          out.csv += fmt(t) + "," + fmt(x) + "," + fmt(y) + "," + fmt(u) +
                     "," + fmt(r) + "\n";
        } catch (const std::domain_error&) {
          ++singular_nodes;
          out.csv +=
              fmt(t) + "," + fmt(x) + "," + fmt(y) + ",singular,singular\n";
        }
      }
    }
  }
  out.manifest = {
      {"family", c.name},
      {"parameters", nlohmann::json::object()},
      {"model", "dN"},
      {"grid", grid_json(g)},
      {"tolerance", tolerance},
      {"max_residual", out.max_residual},
      {"rows", g.nt * g.nx * g.ny},
      {"singular_nodes", singular_nodes},
  };
  return out;
}

}  // namespace nyz::sol
