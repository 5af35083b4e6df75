#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "heegner/ec_arith.hpp"
#include "heegner/error.hpp"
#include "heegner/heegner.hpp"
#include "heegner/quadforms.hpp"
#include "heegner/survey.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace heegner;

namespace {

CurveRecord lookup(const std::string & label)
{
    if (auto rec = builtin_curve(label))
        return *rec;
    throw ValidationError("no built-in curve labelled " + label);
}

py::dict trace(const std::string & label, std::int64_t D, std::int64_t r, Precision prec)
{
    CurveRecord rec = lookup(label);
    HeegnerPair pair = make_heegner_pair(rec.conductor, D, r);
    TraceResult t;
    {
        py::gil_scoped_release release;
        CurveContext ctx(rec, prec);
        t = compute_trace(ctx, pair);
    }
    py::object point = py::none(), index = py::none();
    if (t.recognized) {
        std::ostringstream os;
        os << t.point;
        point = py::str(os.str());
        if (!t.torsion)
            index = py::int_(t.index);
    }
    return py::dict("label"_a = rec.label, "D"_a = pair.D, "r"_a = pair.r, "u_D"_a = t.u_D,
                    "recognized"_a = t.recognized, "torsion"_a = t.torsion, "point"_a = point, "index"_a = index,
                    "residual"_a = t.residual, "precision_bits"_a = t.precision_bits, "error"_a = t.error);
}

std::string survey(const std::string & curves, std::int64_t dmax, Precision prec, unsigned jobs, bool revalidate)
{
    SurveyOptions o;
    o.dmax = dmax;
    o.precision_bits = prec;
    o.jobs = jobs;
    o.revalidate = revalidate;
    std::istringstream in(curves.empty() ? std::string(builtin_curve_table()) : curves);
    py::gil_scoped_release release;
    SurveyReport report = run_survey(parse_curve_stream_lenient(in, "<python>"), o);
    return to_json(report, false).dump();
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Heegner point indexes of rank-one elliptic curves";

    py::register_exception<Error>(m, "HeegnerError", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    m.def("nu", &nu, "N"_a, "Number of real components of X0+(N), N prime");
    m.def(
        "class_number",
        [](std::int64_t Delta) {
            if (!is_discriminant(Delta))
                throw DomainError(std::to_string(Delta) + " is not a discriminant");
            return Delta < 0 ? class_number(Delta) : indefinite_class_number(Delta);
        },
        "Delta"_a);
    m.def(
        "an", [](const std::string & label, std::size_t M) { return an_table(lookup(label).curve(), M).coefficients; },
        "label"_a, "M"_a, "a_E(1..M) of a built-in curve");
    m.def("weight", &weight_uD, "D"_a, "N"_a);
    m.def("labels", [] {
        std::vector<std::string> out;
        for (const CurveRecord & rec : builtin_curves())
            out.push_back(rec.label);
        return out;
    });
    m.def("trace", &trace, "label"_a, "D"_a, "r"_a, "prec"_a = default_precision);
    m.def("survey_json", &survey, "curves"_a = "", "dmax"_a = default_dmax, "prec"_a = default_precision,
          "jobs"_a = 1u, "revalidate"_a = true);
}
