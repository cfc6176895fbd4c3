#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "degen/degiorgi.hpp"
#include "degen/errors.hpp"
#include "degen/geodesics.hpp"
#include "degen/geometry.hpp"
#include "degen/orlicz.hpp"
#include "degen/spectral.hpp"
#include "degen/subrep.hpp"
#include "degen/volumes.hpp"

namespace py = pybind11;
using namespace degen;

PYBIND11_MODULE(_degen, m) {
  m.doc() = "Numerical checks for degenerate elliptic geometry";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NonConvergence>(m, "NonConvergence", PyExc_RuntimeError);
  py::register_exception<BracketError>(m, "BracketError", PyExc_RuntimeError);
  py::register_exception<ZeroFunction>(m, "ZeroFunction", PyExc_ValueError);

  py::class_<Geometry>(m, "Geometry")
      .def("F", &Geometry::F)
      .def("Fp", &Geometry::Fp)
      .def("Fpp", &Geometry::Fpp)
      .def("f", &Geometry::f)
      .def("Finv", &Geometry::Finv)
      .def_property_readonly("R", &Geometry::R)
      .def_property_readonly("eps", &Geometry::eps)
      .def_property_readonly("C_struct", &Geometry::C_struct)
      .def_property_readonly("sigma", &Geometry::sigma)
      .def_property_readonly("name", &Geometry::name);
  m.def("power_geometry", &make_power_geometry, py::arg("sigma"), py::arg("R") = 1.0);

  m.def(
      "structure_conditions",
      [](const Geometry& g, int kmin, int kmax) {
        py::dict out;
        for (const auto& r : check_structure_conditions(g, dyadic_grid(g.R(), kmin, kmax))) out[py::str(r.name)] = r.pass;
        return out;
      },
      py::arg("g"), py::arg("kmin") = 3, py::arg("kmax") = 20);

  m.def(
      "turning_data",
      [](const Geometry& g, double lam) {
        GeodesicRecord r = turning_data(g, lam, 16);
        py::dict out;
        out["X"] = r.X;
        out["Y"] = r.Y;
        out["length"] = r.R_len;
        out["Y_prime"] = r.Y_prime;
        return out;
      },
      py::arg("g"), py::arg("lam"));
  m.def(
      "distance",
      [](const Geometry& g, std::vector<double> p, std::vector<double> q) {
        if (p.size() != q.size() || p.size() < 2) throw DomainError("distance: points of equal dimension >= 2");
        if (p.size() == 2) return control_distance_2d(g, {p[0], p[1]}, {q[0], q[1]}).d;
        return control_distance_nd(g, p, q);
      },
      py::arg("g"), py::arg("p"), py::arg("q"));

  m.def(
      "ball_volume",
      [](const Geometry& g, double x1, double r, int dim, bool oracle) {
        BallVolumeResult v = dim == 2 ? area_2d(g, x1, r, oracle) : volume_nd(g, x1, r, dim, oracle);
        py::dict out;
        out["log_formula"] = v.log_formula;
        out["regime"] = to_string(v.regime);
        if (v.has_oracle) {
          out["log_oracle"] = v.log_oracle;
          out["ratio"] = v.ratio();
        }
        return out;
      },
      py::arg("g"), py::arg("x1"), py::arg("r"), py::arg("dim") = 2, py::arg("oracle") = false);

  py::class_<YoungFunction>(m, "YoungFunction")
      .def(py::init<double, bool>(), py::arg("N"), py::arg("allow_large_N") = false)
      .def_property_readonly("N", &YoungFunction::N)
      .def_property_readonly("E", &YoungFunction::E)
      .def("phi", &YoungFunction::phi)
      .def("phi_inverse", &YoungFunction::phi_inverse)
      .def("conj", &YoungFunction::conj)
      .def("conj_inverse", &YoungFunction::conj_inverse)
      .def("gamma", &YoungFunction::gamma)
      .def("h", &YoungFunction::h);
  m.def(
      "orlicz_norm",
      [](const YoungFunction& yf, const std::vector<double>& f, const std::vector<double>& w) {
        return orlicz_norm(yf, f, w);
      },
      py::arg("yf"), py::arg("f"), py::arg("w"));

  m.def(
      "b0_threshold",
      [](double N, double ratio) {
        IterationParams p;
        p.N = N;
        p.superradius_ratio = ratio;
        return b0_threshold(YoungFunction(N), p).b0;
      },
      py::arg("N") = 2.0, py::arg("ratio") = 1.0);
  m.def(
      "max_principle_b0", [](double N, double C, double c) { return max_principle_b0(YoungFunction(N), C, c); },
      py::arg("N") = 2.0, py::arg("C") = 100.0, py::arg("c") = 0.3);

  m.def(
      "sobolev_endpoint",
      [](double sigma, double N, double r0, double y1) {
        EndpointResult e = sobolev_endpoint_integral(make_power_geometry(sigma), N, r0, y1, 2);
        py::dict out;
        out["I"] = e.I;
        out["bound"] = e.bound;
        out["gammacond_ok"] = e.gammacond_ok;
        out["q_max"] = e.q_max;
        return out;
      },
      py::arg("sigma"), py::arg("N") = 2.0, py::arg("r0") = 0.125, py::arg("y1") = 0.05);

  m.def(
      "least_eigenvalue",
      [](double delta0, double eta, double a, int m) {
        return least_eigen(decay_potential(delta0), eta, a, m, false).lambda0;
      },
      py::arg("delta0"), py::arg("eta"), py::arg("a") = 1.0, py::arg("m") = 2000);
  m.def("mu0", &mu0, py::arg("a"), py::arg("m") = 2000);
  m.def("l4_partial_sums", &l4_partial_sums, py::arg("b"), py::arg("Ms"));
  m.def(
      "convolution_lower_bound",
      [](double alpha_prime, int nmax) {
        SeriesSpec s;
        s.alpha_prime = alpha_prime;
        return convolution_lower_bound(s, nmax).c_min;
      },
      py::arg("alpha_prime") = 0.25, py::arg("nmax") = 1000);
}
