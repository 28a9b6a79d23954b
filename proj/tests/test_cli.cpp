#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>

#include "terramap/image.hpp"
#include "test_support.hpp"

namespace terramap {
namespace {

using testing::fixture;
using testing::TempDir;

int run(const std::string& args) {
  const std::string cmd = std::string(TERRAMAP_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

TEST(Cli, DotWritesPngOfRequestedSize) {
  TempDir dir("cli");
  ASSERT_EQ(run("dot " + q(fixture("bus.csv")) + " --tiles none --size 800x600 --out " + q(dir / "d.png")), 0);
  const Image img = read_image(dir / "d.png");
  EXPECT_EQ(img.width(), 800);
  EXPECT_EQ(img.height(), 600);
}

TEST(Cli, KdeWithBandwidth) {
  TempDir dir("cli");
  ASSERT_EQ(run("kde " + q(fixture("bus.csv")) + " --tiles none --bw 5,5 --cmap coolwarm --size 320x240 --out " +
                q(dir / "k.png")),
            0);
  EXPECT_EQ(read_image(dir / "k.png").width(), 320);
}

TEST(Cli, OtherLayerTypes) {
  TempDir dir("cli");
  const std::string common = " --tiles none --size 200x150 --out ";
  EXPECT_EQ(run("hist " + q(fixture("bus.csv")) + " --binsize 8 --scale log" + common + q(dir / "h.png")), 0);
  EXPECT_EQ(run("graph " + q(fixture("flights.csv")) + common + q(dir / "g.png")), 0);
  EXPECT_EQ(run("voronoi " + q(fixture("metro.csv")) + " --fill" + common + q(dir / "v.png")), 0);
  EXPECT_EQ(run("delaunay " + q(fixture("metro.csv")) + common + q(dir / "t.png")), 0);
  EXPECT_EQ(run("convexhull " + q(fixture("metro.csv")) + common + q(dir / "c.png")), 0);
  EXPECT_EQ(run("shapefile " + q(fixture("polygons")) + common + q(dir / "s.png")), 0);
  EXPECT_EQ(run("geojson " + q(fixture("counties.geojson")) + " --fill --color 0,0,255,120" + common +
                q(dir / "j.png")),
            0);
  for (const char* f : {"h", "g", "v", "t", "c", "s", "j"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / (std::string(f) + ".png"))) << f;
  }
}

TEST(Cli, BadInputExitsTwo) {
  TempDir dir("cli");
  EXPECT_EQ(run("dot " + q(fixture("bus.csv")) + " --tiles none --lat nope --out " + q(dir / "x.png")), 2);
  EXPECT_EQ(run("graph " + q(fixture("bus.csv")) + " --tiles none --out " + q(dir / "x.png")), 2);
  EXPECT_EQ(run("dot /nonexistent.csv --tiles none --out " + q(dir / "x.png")), 2);
  EXPECT_EQ(run("kde " + q(fixture("bus.csv")) + " --tiles none --bw 0,5 --out " + q(dir / "x.png")), 2);
  EXPECT_EQ(run("dot " + q(fixture("bus.csv")) + " --tiles none --bbox 1,2,3 --out " + q(dir / "x.png")), 2);
  EXPECT_EQ(run("dot " + q(fixture("bus.csv")) + " --tiles none --color 300,0,0 --out " + q(dir / "x.png")), 2);
  EXPECT_EQ(run("nosuchcommand"), 2);
  EXPECT_EQ(run("dot"), 2);
  EXPECT_FALSE(std::filesystem::exists(dir / "x.png"));
  EXPECT_EQ(run("--help"), 0);
}

TEST(Cli, BenchSmallRun) {
  TempDir dir("cli");
  ASSERT_EQ(run("bench -n 2000 -r 2 --only dot hist --csv " + q(dir / "b.csv")), 0);
  std::ifstream in(dir / "b.csv");
  std::string header, row1, row2, extra;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  EXPECT_EQ(row1.rfind("dot,", 0), 0u);
  EXPECT_EQ(row2.rfind("hist,", 0), 0u);
  EXPECT_FALSE(std::getline(in, extra) && !extra.empty());
}

}  // namespace
}  // namespace terramap
