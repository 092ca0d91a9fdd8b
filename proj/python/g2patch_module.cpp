#include "g2patch/parallel.hpp"
#include "g2patch/pde.hpp"
#include "g2patch/vertex.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace g2patch;

namespace {

BoundaryCondition to_bc(const std::string& s) {
    if (s == "none") return BoundaryCondition::none;
    if (s == "order2") return BoundaryCondition::order2;
    throw py::value_error("bc must be 'none' or 'order2'");
}

void check_degree(int d) {
    if (d != 5 && d != 6) throw py::value_error("degree must be 5 or 6");
}

py::dict report_dict(const RunReport& r) {
    py::dict out;
    out["level"] = r.level;
    out["d"] = r.d;
    out["total"] = r.total;
    out["patch"] = r.patch;
    out["edge"] = r.edge;
    out["vertex"] = r.vertex;
    out["errors"] = std::vector<double>(r.err.begin(), r.err.end());
    out["cond"] = r.cond;
    out["seconds"] = r.seconds;
    return out;
}

py::dict analyze(const MultiPatchDomain& dom, int d, int L, const std::string& bc) {
    check_degree(d);
    AnalysisOptions ao;
    ao.bc = to_bc(bc);
    auto an = analyze_space(dom, SplineSpace(d, (1 << L) - 1), ao);
    py::dict out;
    out["total"] = an.total;
    out["patch"] = an.patch_dim;
    out["edge"] = an.edge_dim;
    out["vertex"] = an.merged ? an.total - an.patch_dim - an.edge_dim : an.vertex_dim;
    out["merged"] = an.merged;
    out["closed_total"] = an.closed_available ? py::cast(an.closed_total) : py::none();
    return out;
}

py::tuple basis(const MultiPatchDomain& dom, int d, int L, const std::string& bc) {
    check_degree(d);
    auto B = build_basis(dom, d, L, {to_bc(bc), default_threads()});
    const auto nnz = B.B.nonZeros();
    py::array_t<long long> rows(nnz), cols(nnz);
    py::array_t<double> vals(nnz);
    auto r = rows.mutable_unchecked<1>();
    auto c = cols.mutable_unchecked<1>();
    auto v = vals.mutable_unchecked<1>();
    py::ssize_t i = 0;
    for (int k = 0; k < B.B.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(B.B, k); it; ++it, ++i) {
            r(i) = it.row();
            c(i) = it.col();
            v(i) = it.value();
        }
    std::vector<std::string> tags;
    for (auto t : B.tags) tags.emplace_back(tag_name(t));
    return py::make_tuple(rows, cols, vals, py::make_tuple(B.B.rows(), B.B.cols()), tags);
}

} // namespace

PYBIND11_MODULE(g2patch, m) {
    m.doc() = "C2-smooth isogeometric spaces on bilinear multi-patch domains";

    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<MultiPatchDomain>(m, "Domain")
        .def_property_readonly("num_patches", &MultiPatchDomain::num_patches)
        .def_property_readonly("num_interfaces", [](const MultiPatchDomain& d) { return d.interfaces.size(); })
        .def_property_readonly("vertices",
                               [](const MultiPatchDomain& d) {
                                   std::vector<std::pair<double, double>> out;
                                   for (const auto& p : d.v) out.emplace_back(p[0], p[1]);
                                   return out;
                               })
        .def_property_readonly("patches", [](const MultiPatchDomain& d) { return d.patches; })
        .def("to_json", &domain_to_json);

    m.def("load_domain", [](const std::string& path) { return load_domain_file(path); }, py::arg("path"));
    m.def("parse_domain", [](const std::string& text) { return load_domain(text); }, py::arg("json_text"));

    m.def("analyze", &analyze, py::arg("domain"), py::arg("d"), py::arg("L"), py::arg("bc") = "none",
          "Dimension of the C2 space and its patch/edge/vertex split.");
    m.def(
        "nullity",
        [](const MultiPatchDomain& dom, int d, int L, const std::string& bc) {
            check_degree(d);
            return nullity_exact<Fp1>(dom, SplineSpace(d, (1 << L) - 1), to_bc(bc));
        },
        py::arg("domain"), py::arg("d"), py::arg("L"), py::arg("bc") = "none");
    m.def("basis", &basis, py::arg("domain"), py::arg("d"), py::arg("L"), py::arg("bc") = "none",
          "Basis coefficients as COO triplets (rows, cols, values, shape, tags).");

    m.def(
        "fit",
        [](const MultiPatchDomain& dom, int d, int L) {
            check_degree(d);
            PdeOptions opt;
            opt.threads = default_threads();
            return report_dict(solve_l2(dom, d, L, TrigField{}, opt));
        },
        py::arg("domain"), py::arg("d"), py::arg("L"));
    m.def(
        "triharmonic",
        [](const MultiPatchDomain& dom, int d, int L, const std::string& amplitude) {
            check_degree(d);
            auto man = manufactured_solution(dom, parse_rational(amplitude));
            PdeOptions opt;
            opt.threads = default_threads();
            return report_dict(solve_triharmonic(dom, d, L, ManufacturedField(man), ManufacturedRhs(man), opt));
        },
        py::arg("domain"), py::arg("d"), py::arg("L"), py::arg("amplitude") = "1");

    m.def("closed_form_vertex_dim", &closed_form_vertex_dim, py::arg("valency"), py::arg("type"),
          py::arg("boundary") = false);
    m.def(
        "vertex_check",
        [](int nu, int rho, bool boundary, int count, unsigned long long seed) {
            std::mt19937_64 rng(seed);
            int match = 0;
            const int cf = closed_form_vertex_dim(nu, rho, boundary);
            for (int i = 0; i < count; ++i) match += numeric_vertex_dim(random_fan({nu, rho, boundary}, rng), 5, 3) == cf;
            return py::make_tuple(match, count, cf);
        },
        py::arg("valency"), py::arg("type"), py::arg("boundary") = false, py::arg("count") = 20, py::arg("seed") = 0);
}
