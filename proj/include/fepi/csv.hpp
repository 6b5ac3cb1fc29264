#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>

#include "fepi/common.hpp"
#include "fepi/trajectory.hpp"

namespace fepi {

namespace detail {

inline void append_number(std::string& out, double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    if (ec != std::errc()) {
        out += "nan";
        return;
    }
    out.append(buf, ptr);
}

} // namespace detail

/// Full-precision decimal CSV (17 significant digits, round-trip exact) with
/// the documented column order:
///   t, omega, eta, phi, Omega, Yf_*, theta_hat_*, theta_true_*, err_norm
inline void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("csv: cannot open '" + path + "' for writing");
    std::string buf;
    buf.reserve(1 << 20);
    buf += "t,omega,eta,phi,Omega";
    for (std::size_t c = 1; c <= traj.dim(); ++c) buf += ",Yf_" + std::to_string(c);
    for (std::size_t c = 1; c <= traj.dim(); ++c) buf += ",theta_hat_" + std::to_string(c);
    for (std::size_t c = 1; c <= traj.dim(); ++c) buf += ",theta_true_" + std::to_string(c);
    buf += ",err_norm\n";
    for (std::size_t i = 0; i < traj.samples(); ++i) {
        detail::append_number(buf, traj.t[i]);
        buf += ',';
        detail::append_number(buf, traj.omega[i]);
        buf += ',';
        detail::append_number(buf, traj.eta[i]);
        buf += ',';
        detail::append_number(buf, traj.phi[i]);
        buf += ',';
        detail::append_number(buf, traj.Omega[i]);
        for (std::size_t c = 0; c < traj.dim(); ++c) {
            buf += ',';
            detail::append_number(buf, traj.yf[c][i]);
        }
        for (std::size_t c = 0; c < traj.dim(); ++c) {
            buf += ',';
            detail::append_number(buf, traj.theta_hat[c][i]);
        }
        for (std::size_t c = 0; c < traj.dim(); ++c) {
            buf += ',';
            detail::append_number(buf, traj.theta_true[c][i]);
        }
        buf += ',';
        detail::append_number(buf, traj.err_norm[i]);
        buf += '\n';
        if (buf.size() > (1 << 20)) {
            f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

} // namespace fepi
