#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "xdgdl/typesys.hpp"
#include "xdgdl/view_engine.hpp"

namespace {

namespace fs = std::filesystem;
using namespace xdgdl;
using namespace xdgdl_test;

struct run_result {
  int status = -1;
  std::string out;
  std::string err;
};

// Runs the CLI with `args` (already shell quoted) inside `dir`.
run_result run(const scratch_dir& dir, const std::string& args, const std::string& env = "") {
  fs::path out = dir / ".stdout";
  fs::path err = dir / ".stderr";
  std::string cmd = env + " '" + std::string(XDGDL_CLI_PATH) + "' " + args + " >'" + out.string() + "' 2>'" +
                    err.string() + "'";
  int raw = std::system(cmd.c_str());
  run_result r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = read_text(out);
  r.err = read_text(err);
  return r;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

void write_bytes(const fs::path& path, const std::vector<std::byte>& data) {
  write_text(path, std::string(reinterpret_cast<const char*>(data.data()), data.size()));
}

TEST(cli, validate) {
  scratch_dir dir("cli_validate");
  run_result ok = run(dir, "validate " + q(data_file("two_server.xml")));
  EXPECT_EQ(ok.status, 0) << ok.err;
  EXPECT_NE(ok.out.find(": valid"), std::string::npos);

  write_text(dir / "bad.xml", "<PARSTORAGE VERSION=\"1.0\"><ISLAND NAME=\"i\"/></PARSTORAGE>");
  run_result bad = run(dir, "validate " + q(dir / "bad.xml"));
  EXPECT_EQ(bad.status, 2);
  EXPECT_NE((bad.out + bad.err).find("TIMESTAMP"), std::string::npos) << bad.out << bad.err;

  write_text(dir / "broken.xml", "<PARSTORAGE");
  EXPECT_EQ(run(dir, "validate " + q(dir / "broken.xml")).status, 2);
  EXPECT_EQ(run(dir, "validate " + q(dir / "missing.xml")).status, 4);
}

TEST(cli, usage_errors) {
  scratch_dir dir("cli_usage");
  EXPECT_EQ(run(dir, "").status, 1);
  EXPECT_EQ(run(dir, "frobnicate").status, 1);
  EXPECT_EQ(run(dir, "plan " + q(data_file("two_server.xml"))).status, 1);
  EXPECT_EQ(run(dir, "plan " + q(data_file("two_server.xml")) + " --size -3").status, 1);
  EXPECT_EQ(run(dir, "--help").status, 0);
}

TEST(cli, plan) {
  scratch_dir dir("cli_plan");
  run_result two = run(dir, "plan " + q(data_file("two_server.xml")) + " --size 72");
  EXPECT_EQ(two.status, 0) << two.err;
  // each line's extents must select exactly the bytes the oracle marks
  Document doc = load_document("two_server.xml");
  std::istringstream lines(two.out);
  std::string line;
  for (const auto& server : doc.island.servers) {
    ASSERT_TRUE(std::getline(lines, line));
    auto tab = line.find('\t');
    ASSERT_NE(tab, std::string::npos) << line;
    EXPECT_EQ(line.substr(0, tab), doc.island.name + "/" + server.host + "/" + server.devices[0].device_id);
    std::vector<bool> printed(72, false);
    std::istringstream extents(line.substr(tab + 1));
    std::string item;
    while (std::getline(extents, item, ',')) {
      auto colon = item.find(':');
      std::size_t start = std::stoul(item.substr(0, colon));
      std::size_t length = std::stoul(item.substr(colon + 1));
      for (std::size_t i = start; i < start + length; ++i) printed.at(i) = true;
    }
    EXPECT_EQ(printed, brute_mask(*server.devices[0].view(), 72)) << line;
  }
  ASSERT_TRUE(std::getline(lines, line));
  EXPECT_EQ(line, "partition: exact");
  EXPECT_FALSE(std::getline(lines, line));

  run_result printed = run(dir, "plan " + q(data_file("three_server.xml")) + " --size 82");
  EXPECT_EQ(printed.status, 3);
  EXPECT_NE(printed.out.find("partition: gaps+overlaps"), std::string::npos) << printed.out;
  EXPECT_FALSE(printed.err.empty());
  EXPECT_EQ(printed.err.find("partition:"), std::string::npos) << printed.err;

  run_result fixed = run(dir, "plan " + q(data_file("three_server_corrected.xml")) + " --size 82");
  EXPECT_EQ(fixed.status, 0) << fixed.err;
}

TEST(cli, scatter_then_gather) {
  scratch_dir dir("cli_sg");
  auto data = byte_pattern(1234, 9);
  write_bytes(dir / "in.bin", data);
  fs::path desc = data_file("three_server_corrected.xml");

  run_result s = run(dir, "scatter " + q(dir / "in.bin") + " " + q(desc) + " --out " + q(dir / "frags"));
  ASSERT_EQ(s.status, 0) << s.err;
  for (int i = 0; i < 3; ++i) {
    EXPECT_TRUE(fs::exists(dir / "frags" / ("regular_multilevel_corrected." + std::to_string(i) + ".frag")));
  }
  run_result g = run(dir, "gather " + q(desc) + " --frags " + q(dir / "frags") + " --size 1234 --out " +
                              q(dir / "out.bin"));
  ASSERT_EQ(g.status, 0) << g.err;
  EXPECT_EQ(read_text(dir / "out.bin"), read_text(dir / "in.bin"));

  fs::remove(dir / "frags" / "regular_multilevel_corrected.1.frag");
  EXPECT_EQ(run(dir, "gather " + q(desc) + " --frags " + q(dir / "frags") + " --size 1234 --out " +
                         q(dir / "out2.bin"))
                .status,
            4);
  EXPECT_EQ(run(dir, "scatter " + q(dir / "in.bin") + " " + q(data_file("three_server.xml")) + " --out " +
                         q(dir / "f2"))
                .status,
            3);
}

TEST(cli, store_workflow) {
  scratch_dir dir("cli_store");
  write_text(dir / "ViPIOS.conf", rewritten_config(dir.path()));
  const std::string env = "VIP_CONF=" + q(dir / "ViPIOS.conf");
  auto data = byte_pattern(9000, 4);
  write_bytes(dir / "alpha", data);
  write_bytes(dir / "beta", data);
  write_text(dir / ".vd.beta", read_text(data_file("two_server.xml")));

  run_result a = run(dir, "cp-in " + q(dir / "alpha"), env);
  ASSERT_EQ(a.status, 0) << a.err;
  EXPECT_NE(a.out.find("alpha: 9000 bytes on 3 devices (cyclic default)"), std::string::npos) << a.out;
  run_result b = run(dir, "cp-in " + q(dir / "beta"), env);
  ASSERT_EQ(b.status, 0) << b.err;
  EXPECT_NE(b.out.find("(sidecar)"), std::string::npos) << b.out;

  run_result listing = run(dir, "ls", env);
  EXPECT_EQ(listing.status, 0);
  EXPECT_EQ(listing.out, "alpha\nbeta\n");

  fs::create_directories(dir / "restore");
  ASSERT_EQ(run(dir, "cp-out alpha " + q(dir / "restore"), env).status, 0);
  ASSERT_EQ(run(dir, "cp-out beta " + q(dir / "restore" / "b2"), env).status, 0);
  EXPECT_EQ(read_text(dir / "restore" / "alpha"), read_text(dir / "alpha"));
  EXPECT_EQ(read_text(dir / "restore" / "b2"), read_text(dir / "beta"));

  // second copy of the same sidecar timestamp collides
  EXPECT_EQ(run(dir, "cp-in " + q(dir / "beta"), env).status, 4);
  EXPECT_EQ(run(dir, "cp-out gamma " + q(dir / "x"), env).status, 4);
  EXPECT_EQ(run(dir, "ls", "VIP_CONF=").status, 4);

  write_bytes(dir / "gamma", data);
  write_text(dir / ".vd.gamma", read_text(data_file("three_server.xml")));
  EXPECT_EQ(run(dir, "cp-in " + q(dir / "gamma"), env).status, 3);
}

TEST(cli, hpf_compile) {
  scratch_dir dir("cli_hpf");
  write_text(dir / "matrix.xml",
             "<PARSTORAGE VERSION=\"1.0\" TIMESTAMP=\"matrix\">"
             "<PROCESSORS NAME=\"procs\"><PROC_DIMENSION UPPER=\"2\"/><PROC_DIMENSION UPPER=\"2\"/></PROCESSORS>"
             "<TYPE><ARRAY NAME=\"m\" DISTRIBUTE_ONTO=\"procs\" MAJOR=\"ROW\"><TYPE><ETYPE TYPE=\"INT\" LENGTH=\"4\"/>"
             "</TYPE><DIMENSION UPPER=\"6\" DISTRIBUTE=\"BLOCK\"/>"
             "<DIMENSION UPPER=\"8\" DISTRIBUTE=\"CYCLIC\" DIST_SKALAR=\"2\"/></ARRAY></TYPE>"
             "<ISLAND NAME=\"grid\"></ISLAND></PARSTORAGE>");
  run_result r = run(dir, "hpf-compile " + q(dir / "matrix.xml") + " --servers n0,n1,n2,n3 --device /dev/sdb --out " +
                              q(dir / "compiled.xml"));
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(run(dir, "validate " + q(dir / "compiled.xml")).status, 0);

  Document doc = parse_document(read_text(dir / "compiled.xml"));
  ASSERT_EQ(doc.island.servers.size(), 4u);
  EXPECT_EQ(doc.island.servers[3].host, "n3");
  EXPECT_EQ(doc.island.servers[3].devices[0].device_id, "/dev/sdb");
  run_result plan = run(dir, "plan " + q(dir / "compiled.xml") + " --size 192");
  EXPECT_EQ(plan.status, 0) << plan.out;

  // rows 0..2 go to processor row 0, columns in pairs alternate
  // processor column, so n0 owns elements (0,0),(0,1),(0,4),(0,5),...
  EXPECT_EQ(enumerate_extents(*doc.island.servers[0].devices[0].view(), 192),
            (ExtentList{{0, 8}, {16, 8}, {32, 8}, {48, 8}, {64, 8}, {80, 8}}));

  EXPECT_EQ(run(dir, "hpf-compile " + q(dir / "matrix.xml") + " --servers n0,n1").status, 2);
  run_result to_stdout = run(dir, "hpf-compile " + q(dir / "matrix.xml") + " --servers a,b,c,d");
  EXPECT_EQ(to_stdout.status, 0);
  EXPECT_NE(to_stdout.out.find("<PARSTORAGE"), std::string::npos);
}

}  // namespace
