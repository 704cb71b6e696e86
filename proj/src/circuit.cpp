#include "kljn/circuit.hpp"

#include <stdexcept>
#include <string>

namespace kljn {

namespace {

void require_positive(double R, const char* what)
{
    if (!(R > 0.0))
        throw std::invalid_argument(std::string(what) + ": resistance must be > 0");
}

void require_same_length(std::size_t a, std::size_t b, const char* what)
{
    if (a != b)
        throw std::invalid_argument(std::string(what) + ": series length mismatch");
}

}  // namespace

LoopSolution solve_single_loop(const Emf& e_A, double R_A, const Emf& e_B, double R_B)
{
    require_positive(R_A, "solve_single_loop");
    require_positive(R_B, "solve_single_loop");
    require_same_length(e_A.size(), e_B.size(), "solve_single_loop");

    const std::size_t n = e_A.size();
    const double sum = R_A + R_B;
    LoopSolution out{TimeSeries(std::vector<double>(n), Unit::volt),
                     TimeSeries(std::vector<double>(n), Unit::ampere)};
    for (std::size_t k = 0; k < n; ++k) {
        const double a = e_A.total(k);
        const double b = e_B.total(k);
        out.i_wire[k] = (a - b) / sum;
        out.u_wire[k] = (a * R_B + b * R_A) / sum;
    }
    return out;
}

DrivenPort solve_current_driven(const Emf& e, double R, const TimeSeries& i_drive,
                                double series_volt)
{
    require_positive(R, "solve_current_driven");
    require_same_length(e.size(), i_drive.size(), "solve_current_driven");

    const std::size_t n = e.size();
    DrivenPort out{TimeSeries(std::vector<double>(n), Unit::volt), i_drive,
                   TimeSeries(std::vector<double>(n), Unit::volt)};
    out.i.unit = Unit::ampere;
    for (std::size_t k = 0; k < n; ++k) {
        out.u_terminal[k] = e.total(k) - i_drive[k] * R;
        // The series source sits inside Eve's branch; the current source
        // absorbs it and the terminal voltage is unaffected.
        out.u_source[k] = out.u_terminal[k] - series_volt;
    }
    return out;
}

DrivenPort solve_voltage_driven(const Emf& e, double R, const TimeSeries& u_drive)
{
    require_positive(R, "solve_voltage_driven");
    require_same_length(e.size(), u_drive.size(), "solve_voltage_driven");

    const std::size_t n = e.size();
    DrivenPort out{u_drive, TimeSeries(std::vector<double>(n), Unit::ampere), u_drive};
    out.u_terminal.unit = Unit::volt;
    out.u_source.unit = Unit::volt;
    for (std::size_t k = 0; k < n; ++k)
        out.i[k] = (e.total(k) - u_drive[k]) / R;
    return out;
}

InjectionSolution solve_injection(const Emf& e_A, double R_A, const Emf& e_B, double R_B,
                                  const TimeSeries& i_inj)
{
    require_positive(R_A, "solve_injection");
    require_positive(R_B, "solve_injection");
    require_same_length(e_A.size(), e_B.size(), "solve_injection");
    require_same_length(e_A.size(), i_inj.size(), "solve_injection");

    const std::size_t n = e_A.size();
    const double G_A = 1.0 / R_A;
    const double G_B = 1.0 / R_B;
    const double G = G_A + G_B;
    InjectionSolution out{TimeSeries(std::vector<double>(n), Unit::ampere),
                          TimeSeries(std::vector<double>(n), Unit::ampere),
                          TimeSeries(std::vector<double>(n), Unit::volt)};
    for (std::size_t k = 0; k < n; ++k) {
        const double a = e_A.total(k);
        const double b = e_B.total(k);
        const double u = (a * G_A + b * G_B + i_inj[k]) / G;
        out.u_node[k] = u;
        out.i_A[k] = (a - u) / R_A;
        out.i_B[k] = (u - b) / R_B;
    }
    return out;
}

double dc_loop_current(double U_DCA, double U_DCB, double R_A, double R_B)
{
    require_positive(R_A, "dc_loop_current");
    require_positive(R_B, "dc_loop_current");
    return (U_DCA - U_DCB) / (R_A + R_B);
}

double dc_wire_voltage(double U_DCA, double U_DCB, double R_A, double R_B)
{
    require_positive(R_A, "dc_wire_voltage");
    require_positive(R_B, "dc_wire_voltage");
    return (U_DCA * R_B + U_DCB * R_A) / (R_A + R_B);
}

}  // namespace kljn
